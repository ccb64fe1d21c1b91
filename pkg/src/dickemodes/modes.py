"""Karhunen-Loeve decomposition of a correlation kernel into temporal modes.

The integral eigenproblem int K(t, t') v(t) dt = n v(t') is discretized by
the Nystrom method: with D the diagonal matrix of quadrature weights, the
symmetric matrix M = D^{1/2} K D^{1/2} is diagonalized and eigenvectors are
mapped back by v = D^{-1/2} u.  Eigenvalues are the photon occupations of
the modes; eigenvectors are orthonormal under the grid quadrature.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError
from .grids import TimeGrid
from .regression import CorrelationKernel


@dataclass(frozen=True, eq=False)
class ModeSet:
    """Temporal modes and their photon occupations, sorted descending.

    `occupations` holds the leading k_max eigenvalues clamped at zero for
    reporting; `raw_eigenvalues` keeps the full unclamped spectrum so that
    trace and positivity diagnostics see the actual eigensolver output.
    `modes[i]` is the i-th mode sampled on the grid, normalized to unit
    quadrature norm, with the largest-magnitude sample made positive.
    """

    grid: TimeGrid
    occupations: np.ndarray
    modes: np.ndarray  # shape (k_max, K)
    raw_eigenvalues: np.ndarray  # all K eigenvalues, descending

    @property
    def total_occupation(self) -> float:
        """Sum of all (clamped) eigenvalues = photon content of the kernel."""
        return float(np.clip(self.raw_eigenvalues, 0.0, None).sum())


def decompose(kernel: CorrelationKernel, k_max: int | None = None) -> ModeSet:
    """Diagonalize a symmetric kernel into a ModeSet with k_max leading modes."""
    k = kernel.grid.n_points
    if k_max is None:
        k_max = k
    if not 1 <= k_max <= k:
        raise ValueError("k_max must be in [1, K]")
    if not np.array_equal(kernel.values, kernel.values.T):
        raise ValueError("kernel must be symmetric")
    sqrt_w = np.sqrt(kernel.grid.weights)
    m = kernel.values * np.outer(sqrt_w, sqrt_w)
    try:
        eigvals, eigvecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericsError("eigendecomposition failed") from exc
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]

    modes = (eigvecs[:, :k_max] / sqrt_w[:, None]).T
    modes = _fix_signs(modes)
    occupations = np.clip(eigvals[:k_max], 0.0, None)
    return ModeSet(kernel.grid, occupations, modes, eigvals)


def _fix_signs(modes: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude sample of each mode positive.

    Ties are broken by the earliest grid point, so the convention is
    deterministic across platforms.
    """
    out = modes.copy()
    for i, v in enumerate(out):
        idx = int(np.argmax(np.abs(v)))  # argmax returns the first maximum
        if v[idx] < 0:
            out[i] = -v
    return out


def occupation_fractions(modeset: ModeSet) -> np.ndarray:
    """Occupations normalized by the full eigenvalue sum of the kernel."""
    total = modeset.total_occupation
    if total <= 0.0:
        raise ValueError("all occupations vanish; fractions are undefined")
    return modeset.occupations / total


def mode_overlap(a: np.ndarray, b: np.ndarray, grid: TimeGrid) -> float:
    """Quadrature inner product of two mode sample vectors on one grid."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != (grid.n_points,) or b.shape != (grid.n_points,):
        raise ValueError("mode samples do not match the grid")
    return float(grid.weights @ (a * b))
