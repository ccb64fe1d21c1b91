"""Delimited and JSON writers for the pipeline outputs.

All numbers are written with 12 significant digits, '.' decimal separator
and no grouping, so identical runs produce byte-identical files.  A path of
"-" writes to stdout.
"""

import json
import sys

import numpy as np

from .grids import TimeGrid
from .ladder import PopulationTrajectory
from .regression import CorrelationKernel


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _emit(path, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _table(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(r) for r in rows)
    return "\n".join(lines) + "\n"


def _table_json(header, rows):
    payload = {"columns": list(header), "data": [[_json_cell(c) for c in r] for r in rows]}
    return json.dumps(payload, indent=1) + "\n"


def _json_cell(cell: str):
    try:
        return float(cell)
    except ValueError:
        return cell


def populations_rows(trajectory: PopulationTrajectory, time_scale: float = 1.0):
    header = ["t"] + [f"pi_{m}" for m in range(trajectory.params.n_emitters + 1)]
    rows = []
    for k, t in enumerate(trajectory.grid.points):
        pops = np.clip(trajectory.populations[k], 0.0, None)  # readout clamp
        rows.append([fmt(t * time_scale)] + [fmt(p) for p in pops])
    return header, rows


def intensity_rows(blocks, time_scale: float = 1.0):
    """blocks: iterable of (method, times, samples)."""
    header = ["t", "intensity", "method"]
    rows = []
    for method, times, samples in blocks:
        for t, v in zip(times, samples):
            rows.append([fmt(t * time_scale), fmt(v), method])
    return header, rows


def kernel_rows(kernel: CorrelationKernel, time_scale: float = 1.0):
    """Long-format upper triangle: one row per pair (i, j >= i)."""
    header = ["t", "tprime", "k"]
    pts = kernel.grid.points
    rows = []
    for i in range(pts.size):
        for j in range(i, pts.size):
            rows.append(
                [fmt(pts[i] * time_scale), fmt(pts[j] * time_scale), fmt(kernel.values[i, j])]
            )
    return header, rows


def modes_rows(grid: TimeGrid, modes: np.ndarray, time_scale: float = 1.0):
    header = ["t"] + [f"v{i + 1}" for i in range(modes.shape[0])]
    rows = []
    for k, t in enumerate(grid.points):
        rows.append([fmt(t * time_scale)] + [fmt(v) for v in modes[:, k]])
    return header, rows


def write_table(path, header, rows, fmt_kind: str = "csv") -> None:
    if fmt_kind == "csv":
        _emit(path, _table(header, rows))
    elif fmt_kind == "json":
        _emit(path, _table_json(header, rows))
    else:
        raise ValueError("format must be 'csv' or 'json'")


def write_occupations_json(path, n: int, method: str, occupations, fractions) -> None:
    payload = {
        "n": int(n),
        "method": method,
        "occupations": [float(x) for x in occupations],
        "fractions": [float(x) for x in fractions],
    }
    _emit(path, json.dumps(payload, indent=1) + "\n")
