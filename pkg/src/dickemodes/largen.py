"""Temporal eigenmodes at very large N from the g-function recurrence.

In the variable z = beta exp(N Gamma t) the logarithmic kernel decomposes
as beta * sum_i g_i(z) g_i(z'), where

    g_1(z) + z g_1'(z) = sqrt(z)/(1 + z)        =>  g_1 = 2 (sqrt(z) - atan(sqrt(z)))/z
    z g_i'(z) = g_{i+1}(z) + z g_{i+1}'(z)      =>  g_{i+1} = g_i - (1/z) int_0^z g_i

Each g_i vanishes like sqrt(z) at the origin and the sequence shrinks, so a
handful of functions suffices.  The (non-orthogonal) components
w_i(t) = sqrt(beta) g_i(z(t)) yield temporal modes through the Gram matrix
of their time overlaps: eigenvectors of A_ij = <w_i, w_j> combine the w_i
into orthogonal modes whose eigenvalues are the photon occupations.

Everything is carried out on a grid logarithmic in z, so the pipeline is
well conditioned for N as large as 1e8 and runs in well under a second.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .analytic import AnalyticParams
from .errors import NumericsError
from .grids import TimeGrid
from .modes import ModeSet, _fix_signs

DEFAULT_FUNCTIONS = 6
_POINTS_PER_UNIT = 125          # grid density in ln z
_HEAD_DECADES_LN = np.log(1e3)  # sub-window margin used for the cumulative integrals


@dataclass(frozen=True, eq=False)
class GFunctionSet:
    """g_1..g_k sampled on a grid logarithmic in z = beta exp(N Gamma t).

    The grid extends below the emission window (z < beta) so the cumulative
    integrals in the recurrence are accurate; `window` marks the index of
    z = beta, the start of the physical time window t >= 0.
    """

    params: AnalyticParams
    z_grid: np.ndarray
    g: np.ndarray  # shape (k, M)
    window: int
    tau_max: float

    @property
    def u_grid(self) -> np.ndarray:
        return np.log(self.z_grid)

    @property
    def n_functions(self) -> int:
        return self.g.shape[0]

    def z_of_t(self, t) -> np.ndarray:
        p = self.params
        return p.beta * np.exp(p.n_emitters * p.gamma * np.asarray(t, dtype=float))

    def t_window(self) -> float:
        return self.tau_max / (self.params.n_emitters * self.params.gamma)


@dataclass(frozen=True, eq=False)
class GramProblem:
    """Temporal overlap matrix A_ij = <w_i, w_j> and component weights."""

    a_matrix: np.ndarray
    lambdas: np.ndarray


def g1(z):
    """Closed form 2 (sqrt(z) - atan(sqrt(z)))/z of the first component."""
    arr = np.asarray(z, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("z must be positive")
    out = np.empty_like(arr, dtype=float)
    small = arr < 1e-6
    if small.any():
        zs = arr[small]
        # atan series: g1 = (2/3) sqrt(z) (1 - 3 z / 5 + 3 z^2 / 7)
        out[small] = (2.0 / 3.0) * np.sqrt(zs) * (1.0 - 0.6 * zs + (3.0 / 7.0) * zs * zs)
    big = ~small
    if big.any():
        zb = arr[big]
        rt = np.sqrt(zb)
        out[big] = 2.0 * (rt - np.arctan(rt)) / zb
    return float(out) if out.ndim == 0 else out


def next_g(g_i: np.ndarray, z_grid: np.ndarray) -> np.ndarray:
    """One recurrence step: g_{i+1}(z) = g_i(z) - (1/z) int_0^z g_i(u) du.

    The integral over the grid is a cubic-spline antiderivative in ln z;
    the head below the first grid point uses the sqrt(z) behaviour of g_i,
    int_0^z0 g_i ~ (2/3) z0 g_i(z0).
    """
    g_i = np.asarray(g_i, dtype=float)
    z = np.asarray(z_grid, dtype=float)
    if g_i.shape != z.shape:
        raise ValueError("g samples and grid differ in length")
    u = np.log(z)
    spline = CubicSpline(u, g_i * z)  # integrand of int g dz in d(ln z)
    cumulative = spline.antiderivative()(u)
    cumulative += (2.0 / 3.0) * z[0] * g_i[0] - cumulative[0]
    if not np.all(np.isfinite(cumulative)):
        raise NumericsError("cumulative integral in the g recurrence failed")
    return g_i - cumulative / z


def build_gset(
    params: AnalyticParams,
    k: int = DEFAULT_FUNCTIONS,
    tau_max: float | None = None,
) -> GFunctionSet:
    """Construct g_1..g_k on a log grid covering z in [beta, beta exp(tau_max)]."""
    if k < 1:
        raise ValueError("need at least one component")
    if tau_max is None:
        # the overlap integrals converge like 1/z_max, so the grid reaches
        # well past the analytic sampling window
        tau_max = np.log(params.n_emitters) + 24.0
    du = 1.0 / _POINTS_PER_UNIT
    n_win = int(np.ceil(tau_max / du))
    n_win += n_win % 2  # even interval count for Simpson quadrature
    du = tau_max / n_win
    n_head = int(np.ceil(_HEAD_DECADES_LN / du))
    u0 = np.log(params.beta)
    u = u0 + du * np.arange(-n_head, n_win + 1)
    z = np.exp(u)
    g = np.empty((k, z.size))
    g[0] = g1(z)
    for i in range(1, k):
        g[i] = next_g(g[i - 1], z)
    return GFunctionSet(params, z, g, n_head, float(tau_max))


def recurrence_residual(gset: GFunctionSet, i: int) -> np.ndarray:
    """Residual z g_i' - (g_{i+1} + z g_{i+1}') on the window interior."""
    if not 0 <= i < gset.n_functions - 1:
        raise ValueError("need components i and i+1 in the set")
    u = gset.u_grid
    dgi = CubicSpline(u, gset.g[i]).derivative()(u)       # z g' = dg/d(ln z)
    dgn = CubicSpline(u, gset.g[i + 1]).derivative()(u)
    res = dgi - gset.g[i + 1] - dgn
    return res[gset.window + 1 : -1]


def overlap_matrix(gset: GFunctionSet, t_window: float | None = None) -> GramProblem:
    """Gram matrix of the time overlaps <w_i, w_j> with w_i = sqrt(beta) g_i.

    The time integral maps to (beta/(N Gamma)) int g_i g_j dz / z over the
    emission window, i.e. a uniform-grid quadrature in ln z.
    """
    p = gset.params
    lo = gset.window
    hi = gset.z_grid.size
    if t_window is not None:
        z_hi = gset.z_of_t(t_window)
        hi = min(hi, int(np.searchsorted(gset.z_grid, z_hi, side="right")))
        if hi - lo < 3:
            raise ValueError("time window too short for the overlap quadrature")
    u = gset.u_grid[lo:hi]
    gw = gset.g[:, lo:hi]
    k = gset.n_functions
    a = np.empty((k, k))
    scale = p.beta / (p.n_emitters * p.gamma)
    for i in range(k):
        for j in range(i, k):
            a[i, j] = a[j, i] = scale * simpson(gw[i] * gw[j], x=u)
    return GramProblem(a, np.ones(k))


def raw_photon_total(gset: GFunctionSet) -> float:
    """Time integral of the unnormalized intensity over the window.

    Equals the full eigenvalue sum of the kernel, so it is the denominator
    that turns raw occupations into fractions of the emitted photons.
    """
    p = gset.params
    z = gset.z_grid[gset.window :]
    u = gset.u_grid[gset.window :]
    integrand = np.log1p(z) / z - 1.0 / (1.0 + z)
    return p.beta / (p.n_emitters * p.gamma) * simpson(integrand, x=u)


def solve_modes(problem: GramProblem, k: int | None = None):
    """Occupations and expansion coefficients from the Gram eigenproblem.

    With unit weights this is the plain symmetric problem A a = nu a; the
    general weighted case is solved as A a = nu diag(1/lambda) a.  Returns
    (nu, coeffs) sorted by descending nu, coeffs[:, i] belonging to nu_i.
    """
    a = problem.a_matrix
    if k is None:
        k = a.shape[0]
    if not 1 <= k <= a.shape[0]:
        raise ValueError("k must be in [1, dim(A)]")
    sub = a[:k, :k]
    try:
        if np.all(problem.lambdas[:k] == 1.0):
            nu, vec = np.linalg.eigh(sub)
        else:
            from scipy.linalg import eigh as generalized_eigh

            nu, vec = generalized_eigh(sub, np.diag(1.0 / problem.lambdas[:k]))
    except np.linalg.LinAlgError as exc:
        raise NumericsError("Gram eigenproblem failed") from exc
    order = np.argsort(nu)[::-1]
    return nu[order], vec[:, order]


def mode_fractions(nu: np.ndarray, gset: GFunctionSet) -> np.ndarray:
    """Occupations as fractions of all emitted photons (sums to <= 1)."""
    return np.clip(nu, 0.0, None) / raw_photon_total(gset)


def assemble_modes(
    nu: np.ndarray,
    coeffs: np.ndarray,
    gset: GFunctionSet,
    grid: TimeGrid,
) -> ModeSet:
    """Sample the combined modes psi_i(t) = sum_j a_j sqrt(beta) g_j(z(t)).

    Modes are renormalized to unit quadrature norm on the grid and follow
    the positive-peak sign convention.  Occupations are expressed in
    photons, i.e. fractions of the total multiplied by N.
    """
    p = gset.params
    n_comp = coeffs.shape[0]
    if n_comp > gset.n_functions:
        raise ValueError("more coefficients than sampled components")
    z = gset.z_of_t(grid.points)
    if z[-1] > gset.z_grid[-1] * (1.0 + 1e-12):
        raise ValueError("time grid extends beyond the sampled z range")
    u = np.log(z)
    gu = np.vstack([CubicSpline(gset.u_grid, gset.g[i])(u) for i in range(n_comp)])
    psi = np.sqrt(p.beta) * (coeffs.T @ gu)
    norms = np.sqrt((psi * psi) @ grid.weights)
    if np.any(norms <= 0.0):
        raise NumericsError("assembled mode has zero norm on the grid")
    psi = _fix_signs(psi / norms[:, None])
    occupations = mode_fractions(nu, gset) * p.n_emitters
    return ModeSet(grid, occupations, psi, np.sort(occupations)[::-1])


def reconstruct_kernel(gset: GFunctionSet, k: int, grid: TimeGrid) -> np.ndarray:
    """Truncated kernel beta * sum_{i<=k} g_i(z) g_i(z') sampled on a time grid."""
    if not 1 <= k <= gset.n_functions:
        raise ValueError("k must be in [1, n_functions]")
    z = gset.z_of_t(grid.points)
    u = np.log(z)
    gu = np.vstack([CubicSpline(gset.u_grid, gset.g[i])(u) for i in range(k)])
    return gset.params.beta * (gu.T @ gu)
