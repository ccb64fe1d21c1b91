"""Failure types shared across the package."""


class NumericsError(RuntimeError):
    """Raised when an integrator, quadrature or eigensolver fails to converge."""
