"""Time grids with trapezoid quadrature weights.

All kernels, intensities and modes in this package are sampled on a
TimeGrid; inner products and photon counts are grid quadratures with the
stored weights.
"""

from dataclasses import dataclass, field

import numpy as np


def trapezoid_weights(points: np.ndarray) -> np.ndarray:
    """Trapezoid quadrature weights for strictly increasing sample points."""
    pts = np.asarray(points, dtype=float)
    w = np.empty_like(pts)
    w[0] = 0.5 * (pts[1] - pts[0])
    w[-1] = 0.5 * (pts[-1] - pts[-2])
    w[1:-1] = 0.5 * (pts[2:] - pts[:-2])
    return w


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing times starting at 0, plus their trapezoid weights."""

    points: np.ndarray
    weights: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least two points")
        if pts[0] != 0.0:
            raise ValueError("grid must start at t = 0")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)
        if self.weights is None:
            object.__setattr__(self, "weights", trapezoid_weights(pts))

    @classmethod
    def uniform(cls, t_end: float, n_points: int) -> "TimeGrid":
        if t_end <= 0:
            raise ValueError("t_end must be positive")
        if n_points < 2:
            raise ValueError("need at least two grid points")
        return cls(np.linspace(0.0, float(t_end), int(n_points)))

    @property
    def n_points(self) -> int:
        return self.points.size

    @property
    def t_end(self) -> float:
        return float(self.points[-1])

    def same_as(self, other: "TimeGrid") -> bool:
        return self.points.shape == other.points.shape and np.array_equal(
            self.points, other.points
        )

    def quadrature(self, samples: np.ndarray) -> float:
        """Integral of sampled values over the grid."""
        return float(self.weights @ np.asarray(samples, dtype=float))
