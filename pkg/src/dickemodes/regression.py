"""Two-time correlation kernel of the emitted field via quantum regression.

For the diagonal cascade, applying the collective lowering operator to
rho(t) populates only the first subdiagonal; its entries xi_m evolve under

    d(xi_m)/dt = -(Gamma_m + Gamma_{m+1})/2 xi_m
                 + sqrt(Gamma_{m+1} Gamma_{m+2}) xi_{m+1},

seeded at the anchor time t with xi_m(t) = c_m pi_{m+1}(t), where
c_m = sqrt(Gamma) sqrt((m+1)(N-m)).  Contracting with c_m again at a later
time t' gives the kernel entry

    K(t, t') = Gamma <J+(t') J-(t)> = sum_m c_m xi_m(t').

The seed index pi_{m+1} is the unique convention for which the equal-time
kernel reproduces the intensity, K(t, t) = sum_m Gamma_m pi_m = I(t).
The kernel is real and symmetric; only the upper triangle is integrated
and the lower triangle is mirrored.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError
from .grids import TimeGrid
from .ladder import (
    DickeParams,
    PopulationState,
    PopulationTrajectory,
    auto_time_window,
    collective_rates,
    default_step,
    evolve,
)

DEFAULT_GRID_POINTS = 300


@dataclass(frozen=True, eq=False)
class CoherenceState:
    """Subdiagonal amplitudes xi_0..xi_{N-1} (units: sqrt of rate)."""

    xi: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.xi, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("xi must be a finite 1-D array")
        object.__setattr__(self, "xi", arr)


@dataclass(frozen=True, eq=False)
class CorrelationKernel:
    """Real symmetric K x K sampling of the two-time correlation (units: rate)."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        k = self.grid.n_points
        if vals.shape != (k, k):
            raise ValueError("kernel shape must match the grid")
        object.__setattr__(self, "values", vals)

    @property
    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.values)

    def weighted(self) -> np.ndarray:
        """Symmetrized quadrature form D^{1/2} K D^{1/2}."""
        s = np.sqrt(self.grid.weights)
        return self.values * np.outer(s, s)

    def trace_photons(self) -> float:
        """Quadrature of the diagonal = expected total photon number."""
        return float(self.grid.weights @ self.diagonal)


def coupling_coefficients(params: DickeParams) -> np.ndarray:
    """c_m = sqrt(Gamma (m+1)(N-m)) for m = 0..N-1."""
    m = np.arange(params.n_emitters, dtype=float)
    return np.sqrt(params.gamma * (m + 1.0) * (params.n_emitters - m))


def seed_coherence(state: PopulationState, params: DickeParams) -> CoherenceState:
    """Subdiagonal seed xi_m = c_m pi_{m+1} obtained by lowering the state."""
    pi = np.asarray(state.populations, dtype=float)
    if pi.shape != (params.n_emitters + 1,):
        raise ValueError("state must have N + 1 entries")
    return CoherenceState(coupling_coefficients(params) * pi[1:])


def regression_rhs(xi, params: DickeParams) -> np.ndarray:
    """Right-hand side of the subdiagonal regression equations."""
    arr = xi.xi if isinstance(xi, CoherenceState) else np.asarray(xi, dtype=float)
    if arr.shape != (params.n_emitters,):
        raise ValueError("xi must have N entries")
    decay, feed = _regression_coefficients(params)
    d = -decay * arr
    if feed.size:
        d[:-1] += feed * arr[1:]
    return d


def _regression_coefficients(params: DickeParams):
    gam = collective_rates(params)
    decay = 0.5 * (gam[:-1] + gam[1:])        # m = 0..N-1
    feed = np.sqrt(gam[1:-1] * gam[2:])       # m = 0..N-2
    return decay, feed


def _substeps(grid: TimeGrid, dt: float) -> int:
    span = grid.points[1] - grid.points[0]
    return max(1, int(np.ceil(span / dt)))


def correlation_row(anchor: int, trajectory: PopulationTrajectory) -> np.ndarray:
    """Kernel entries K(t_anchor, t_j) for j >= anchor.

    Seeds the coherence at the anchor grid point, integrates the regression
    equations forward with the same fixed-step RK4 policy as the cascade and
    contracts with the coupling coefficients at every later grid point.
    """
    params = trajectory.params
    grid = trajectory.grid
    if anchor < 0 or anchor >= grid.n_points:
        raise ValueError("anchor index outside the grid")
    c = coupling_coefficients(params)
    decay, feed = _regression_coefficients(params)
    n_sub = _substeps(grid, default_step(params))
    h = (grid.points[1] - grid.points[0]) / n_sub

    xi = c * trajectory.populations[anchor, 1:]
    row = np.empty(grid.n_points - anchor)
    row[0] = c @ xi
    for j in range(anchor + 1, grid.n_points):
        xi = _rk4_linear(xi, decay, feed, h, n_sub)
        row[j - anchor] = c @ xi
    if not np.all(np.isfinite(row)):
        raise NumericsError("regression integration diverged")
    return row


def _rk4_linear(y, decay, feed, h, n_sub):
    """Fixed-step RK4 for the lower-bidiagonal regression generator.

    Works on a single state vector or on a matrix whose columns are
    independently seeded states (the generator is shared).
    """
    dcol = decay if y.ndim == 1 else decay[:, None]
    fcol = feed if y.ndim == 1 else feed[:, None]

    def rhs(v):
        d = -dcol * v
        if feed.size:
            d[:-1] += fcol * v[1:]
        return d

    for _ in range(n_sub):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return y


def build_kernel(
    params: DickeParams,
    grid: TimeGrid | None = None,
    trajectory: PopulationTrajectory | None = None,
) -> CorrelationKernel:
    """Assemble the full symmetric correlation kernel on a time grid.

    All anchor rows share one generator, so the columns are marched together:
    at grid point j a new column is seeded from pi(t_j), every active column
    is contracted to fill K[i <= j, j], and the block is advanced to the next
    grid point.  This is algebraically identical to row-by-row integration.
    """
    if grid is None:
        grid = (
            trajectory.grid
            if trajectory is not None
            else TimeGrid.uniform(auto_time_window(params), DEFAULT_GRID_POINTS)
        )
    if trajectory is None:
        trajectory = evolve(params, t_end=grid.t_end, grid_points=grid.n_points)
    elif not trajectory.grid.same_as(grid):
        raise ValueError("trajectory grid does not match the requested grid")

    n = params.n_emitters
    k = grid.n_points
    c = coupling_coefficients(params)
    decay, feed = _regression_coefficients(params)
    n_sub = _substeps(grid, default_step(params))
    h = (grid.points[1] - grid.points[0]) / n_sub

    values = np.zeros((k, k))
    active = np.empty((n, k))
    for j in range(k):
        active[:, j] = c * trajectory.populations[j, 1:]
        values[: j + 1, j] = c @ active[:, : j + 1]
        if j + 1 < k:
            active[:, : j + 1] = _rk4_linear(active[:, : j + 1], decay, feed, h, n_sub)
    if not np.all(np.isfinite(values)):
        raise NumericsError("regression integration diverged")
    upper = np.triu(values)
    values = upper + np.triu(values, 1).T
    return CorrelationKernel(grid, values)
