"""Command-line frontend: evolve | intensity | kernel | modes.

Each subcommand runs one pipeline and writes plot-ready data files
(CSV by default, JSON on request); --plot additionally renders a matplotlib
figure next to the data file.  Exit codes: 0 ok, 2 argument error,
3 numerical failure.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import io_formats
from .analytic import (
    AnalyticParams,
    analytic_time_window,
    intensity_eq24,
    intensity_eq25,
    intensity_meanfield,
    normalize_to_photons,
    sample_kernel,
    tau_of_t,
)
from .errors import NumericsError
from .grids import TimeGrid
from .ladder import DickeParams, auto_time_window, evolve, intensity
from .largen import assemble_modes, build_gset, mode_fractions, overlap_matrix, solve_modes
from .modes import decompose, occupation_fractions
from .regression import build_kernel

EXACT_N_LIMIT = 2000

INTENSITY_METHODS = ("exact", "eq24", "eq25", "meanfield")
KERNEL_METHODS = ("exact", "eq19", "eq20", "eq22", "eq23")
MODES_METHODS = ("exact", "eq19", "eq20", "eq22", "eq23", "appendix")


@dataclass
class RunConfig:
    subcommand: str
    n_emitters: int
    gamma: float
    lambda_init: float
    grid_points: int
    t_end: float | None
    k_modes: int
    methods: tuple
    out: str
    fmt: str
    time_unit: str
    plot: bool


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dickemodes",
        description="Temporal radiation modes of Dicke superradiance.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, method_default=None, method_help=""):
        p.add_argument("--n", dest="n_emitters", type=int, required=True,
                       help="number of emitters N")
        p.add_argument("--gamma", type=float, default=1.0,
                       help="single-emitter decay rate (default 1.0)")
        p.add_argument("--lambda", dest="lambda_init", type=float, default=0.96,
                       help="initial-condition smoothing of the analytic model")
        p.add_argument("--grid-points", type=int, default=300,
                       help="time grid size K (default 300)")
        p.add_argument("--t-end", default="auto",
                       help="window length in 1/gamma units, or 'auto'")
        p.add_argument("--k-modes", type=int, default=5,
                       help="number of modes to report (default 5)")
        if method_default is not None:
            p.add_argument("--method", default=method_default, help=method_help)
        p.add_argument("--out", default=None,
                       help="output path ('-' for stdout); modes uses it as a base name")
        p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        p.add_argument("--time-unit", choices=("gamma", "collective"), default="gamma",
                       help="time column in 1/gamma units or rescaled by N*gamma")
        p.add_argument("--plot", action="store_true",
                       help="also render a figure next to the data file")

    common(sub.add_parser("evolve", help="populations of the ladder cascade"))
    common(sub.add_parser("intensity", help="emitted intensity"),
           "exact", f"comma list from {INTENSITY_METHODS}")
    common(sub.add_parser("kernel", help="two-time correlation kernel"),
           "exact", f"one of {KERNEL_METHODS}")
    common(sub.add_parser("modes", help="temporal modes and occupations"),
           "exact", f"one of {MODES_METHODS}")
    return parser


def _validated_config(parser: argparse.ArgumentParser, args) -> RunConfig:
    if args.n_emitters < 1:
        parser.error("--n must be >= 1")
    if args.gamma <= 0:
        parser.error("--gamma must be positive")
    if args.grid_points < 2:
        parser.error("--grid-points must be >= 2")
    if args.k_modes < 1:
        parser.error("--k-modes must be >= 1")
    if args.k_modes > args.grid_points:
        parser.error("--k-modes cannot exceed --grid-points")

    if args.t_end == "auto":
        t_end = None
    else:
        try:
            t_end = float(args.t_end)
        except ValueError:
            parser.error("--t-end must be a number or 'auto'")
        if t_end <= 0:
            parser.error("--t-end must be positive")

    methods: tuple = ()
    if hasattr(args, "method"):
        methods = tuple(m.strip() for m in args.method.split(",") if m.strip())
        allowed = {
            "intensity": INTENSITY_METHODS,
            "kernel": KERNEL_METHODS,
            "modes": MODES_METHODS,
        }[args.subcommand]
        if not methods:
            parser.error("--method must not be empty")
        if args.subcommand != "intensity" and len(methods) > 1:
            parser.error(f"{args.subcommand} takes a single --method")
        for m in methods:
            if m not in allowed:
                parser.error(f"unknown method {m!r}; choose from {allowed}")
    needs_exact = args.subcommand == "evolve" or "exact" in methods
    if needs_exact and args.n_emitters > EXACT_N_LIMIT:
        parser.error(f"exact methods are limited to N <= {EXACT_N_LIMIT}")
    analytic_methods = [m for m in methods if m != "exact"]
    if analytic_methods and args.n_emitters < 2:
        parser.error("analytic methods need N >= 2")

    if args.plot and args.out == "-":
        parser.error("--plot needs a file path, not stdout")

    return RunConfig(
        subcommand=args.subcommand,
        n_emitters=args.n_emitters,
        gamma=args.gamma,
        lambda_init=args.lambda_init,
        grid_points=args.grid_points,
        t_end=t_end,
        k_modes=args.k_modes,
        methods=methods,
        out=args.out,
        fmt=args.fmt,
        time_unit=args.time_unit,
        plot=args.plot,
    )


def _dicke(cfg: RunConfig) -> DickeParams:
    return DickeParams(cfg.n_emitters, cfg.gamma)


def _analytic(cfg: RunConfig) -> AnalyticParams:
    return AnalyticParams(cfg.n_emitters, cfg.gamma, cfg.lambda_init)


def _window(cfg: RunConfig, needs_exact: bool) -> float:
    if cfg.t_end is not None:
        return cfg.t_end
    if needs_exact:
        return auto_time_window(_dicke(cfg))
    return analytic_time_window(_analytic(cfg))


def _time_scale(cfg: RunConfig) -> float:
    return cfg.n_emitters * cfg.gamma if cfg.time_unit == "collective" else 1.0


def _time_label(cfg: RunConfig) -> str:
    return "t [1/gamma]" if cfg.time_unit == "gamma" else "N gamma t"


def _out_path(cfg: RunConfig, default: str) -> str:
    return cfg.out if cfg.out is not None else default


def _figure_path(data_path: str) -> str:
    stem = data_path
    for suffix in (".csv", ".json"):
        if stem.endswith(suffix):
            stem = stem[: -len(suffix)]
            break
    return stem + ".png"


def cmd_evolve(cfg: RunConfig) -> int:
    traj = evolve(_dicke(cfg), t_end=cfg.t_end, grid_points=cfg.grid_points)
    header, rows = io_formats.populations_rows(traj, _time_scale(cfg))
    ext = "csv" if cfg.fmt == "csv" else "json"
    path = _out_path(cfg, f"populations_n{cfg.n_emitters}.{ext}")
    io_formats.write_table(path, header, rows, cfg.fmt)
    if cfg.plot:
        from . import figures

        figures.plot_populations(traj, _figure_path(path), _time_scale(cfg), _time_label(cfg))
    return 0


def _intensity_blocks(cfg: RunConfig, grid: TimeGrid):
    blocks = []
    for method in cfg.methods:
        if method == "exact":
            traj = evolve(_dicke(cfg), t_end=grid.t_end, grid_points=grid.n_points)
            samples = intensity(traj)
        elif method == "meanfield":
            samples = intensity_meanfield(grid.points, _analytic(cfg))
        else:
            ap = _analytic(cfg)
            tau = tau_of_t(grid.points, ap)
            raw = intensity_eq24(tau, ap) if method == "eq24" else intensity_eq25(tau, ap)
            samples = normalize_to_photons(raw, grid, ap)
        blocks.append((method, grid.points, samples))
    return blocks


def cmd_intensity(cfg: RunConfig) -> int:
    needs_exact = "exact" in cfg.methods
    grid = TimeGrid.uniform(_window(cfg, needs_exact), cfg.grid_points)
    blocks = _intensity_blocks(cfg, grid)
    header, rows = io_formats.intensity_rows(blocks, _time_scale(cfg))
    ext = "csv" if cfg.fmt == "csv" else "json"
    path = _out_path(cfg, f"intensity_n{cfg.n_emitters}.{ext}")
    io_formats.write_table(path, header, rows, cfg.fmt)
    if cfg.plot:
        from . import figures

        figures.plot_intensity(blocks, _figure_path(path), _time_scale(cfg), _time_label(cfg))
    return 0


def _kernel_for(cfg: RunConfig, method: str, grid: TimeGrid):
    if method == "exact":
        return build_kernel(_dicke(cfg), grid=grid)
    return sample_kernel(method, grid, _analytic(cfg))


def cmd_kernel(cfg: RunConfig) -> int:
    method = cfg.methods[0]
    grid = TimeGrid.uniform(_window(cfg, method == "exact"), cfg.grid_points)
    kernel = _kernel_for(cfg, method, grid)
    header, rows = io_formats.kernel_rows(kernel, _time_scale(cfg))
    ext = "csv" if cfg.fmt == "csv" else "json"
    path = _out_path(cfg, f"kernel_n{cfg.n_emitters}_{method}.{ext}")
    io_formats.write_table(path, header, rows, cfg.fmt)
    if cfg.plot:
        from . import figures

        figures.plot_kernel(kernel, _figure_path(path), _time_scale(cfg), _time_label(cfg))
    return 0


def cmd_modes(cfg: RunConfig) -> int:
    method = cfg.methods[0]
    grid = TimeGrid.uniform(_window(cfg, method == "exact"), cfg.grid_points)
    if method == "appendix":
        ap = _analytic(cfg)
        gset = build_gset(ap, k=max(6, cfg.k_modes))
        nu, coeffs = solve_modes(overlap_matrix(gset), k=cfg.k_modes)
        modeset = assemble_modes(nu, coeffs, gset, grid)
        fractions = mode_fractions(nu, gset)
        occupations = fractions * cfg.n_emitters
    else:
        modeset = decompose(_kernel_for(cfg, method, grid), k_max=cfg.k_modes)
        fractions = occupation_fractions(modeset)
        occupations = modeset.occupations

    base = _out_path(cfg, f"modes_n{cfg.n_emitters}_{method}")
    header, rows = io_formats.modes_rows(grid, modeset.modes, _time_scale(cfg))
    modes_path = f"{base}_modes.{'csv' if cfg.fmt == 'csv' else 'json'}"
    io_formats.write_table(modes_path, header, rows, cfg.fmt)
    io_formats.write_occupations_json(
        f"{base}_occupations.json", cfg.n_emitters, method, occupations, fractions
    )
    if cfg.plot:
        from . import figures

        figures.plot_modes(
            grid, modeset.modes, occupations, f"{base}_modes.png",
            _time_scale(cfg), _time_label(cfg),
        )
    return 0


_COMMANDS = {
    "evolve": cmd_evolve,
    "intensity": cmd_intensity,
    "kernel": cmd_kernel,
    "modes": cmd_modes,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _validated_config(parser, args)
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
