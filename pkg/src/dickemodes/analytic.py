"""Continuous-excitation model of the superradiant pulse.

Treating the excitation number m as a continuous variable turns the
population cascade into a first-order transport equation that is solved
along characteristics: T(m') = T(m) + N t with
T(m) = (1/Gamma) log(m/(N-m)).  A smoothed initial condition
pi(0, m) = exp(-lambda (N - m)), with lambda = 0.96 by default, stands in
for the fully excited state whose continuous rate would otherwise vanish.

From the characteristics solution the two-time correlation kernel is
available in four closed or semi-closed forms of increasing simplicity:

  kernel_eq19  definite y-integral of the characteristics solution
  kernel_eq20  same integral after the large-N simplifications
  kernel_eq22  exponential-integral evaluation of kernel_eq20
  kernel_eq23  logarithmic form obtained from the asymptotic
               ei(-x) ~ -(1/2) exp(-x) log(1 + 2/x)

and the matching intensities (diagonal limits)

  intensity_eq24  for kernel_eq22
  intensity_eq25  for kernel_eq23
  intensity_meanfield  the classical sech^2 reference pulse

All kernel and intensity values are unnormalized; `normalize_to_photons`
rescales samples so that the time-integrated intensity equals N.  Every
exponential-integral appearance is routed through the scaled form
exp(x) E1(x), so the expressions stay finite for N up to 1e8 and beyond.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import NumericsError
from .expint import e1_scaled
from .grids import TimeGrid
from .regression import CorrelationKernel

DEFAULT_LAMBDA = 0.96
KERNEL_METHODS = ("eq19", "eq20", "eq22", "eq23")

_QUAD_OPTS = dict(epsabs=1e-300, epsrel=1e-10, limit=300)


@dataclass(frozen=True)
class AnalyticParams:
    """Emitter count, decay rate and the initial-condition smoothing lambda."""

    n_emitters: int
    gamma: float = 1.0
    lambda_init: float = DEFAULT_LAMBDA

    def __post_init__(self):
        if int(self.n_emitters) != self.n_emitters or self.n_emitters < 2:
            raise ValueError("the continuous model needs n_emitters >= 2")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.lambda_init > 0:
            raise ValueError("lambda_init must be positive")
        object.__setattr__(self, "n_emitters", int(self.n_emitters))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "lambda_init", float(self.lambda_init))

    @property
    def beta(self) -> float:
        """Inverse pulse scale 2 / (lambda N) of the logarithmic kernel."""
        return 2.0 / (self.lambda_init * self.n_emitters)

    @property
    def lambda_n(self) -> float:
        return self.lambda_init * self.n_emitters


@dataclass(frozen=True)
class ScaledTime:
    """Rescaled time tau = N Gamma t with x = exp(tau) and z = beta x."""

    tau: float
    x: float
    z: float


def scaled_time(t: float, params: AnalyticParams) -> ScaledTime:
    if t < 0:
        raise ValueError("t must be non-negative")
    tau = params.n_emitters * params.gamma * t
    x = np.exp(tau)
    return ScaledTime(tau, x, params.beta * x)


def tau_of_t(t, params: AnalyticParams):
    return params.n_emitters * params.gamma * np.asarray(t, dtype=float)


def analytic_time_window(params: AnalyticParams) -> float:
    """Default sampling window (ln N + 20)/(N Gamma).

    The pulse peaks near tau = ln(lambda N) and its tail decays like
    tau exp(-tau); twenty scaled-time units past the peak leave a residual
    photon fraction below 1e-7, so occupation fractions are converged.
    """
    return (np.log(params.n_emitters) + 20.0) / (params.n_emitters * params.gamma)


# ---------------------------------------------------------------------------
# characteristics machinery
# ---------------------------------------------------------------------------

def _check_m(m, n):
    arr = np.asarray(m, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= n):
        raise ValueError("m must lie strictly inside (0, N)")
    return arr


def tee_of_m(m, params: AnalyticParams):
    """Characteristic time T(m) = (1/Gamma) log(m/(N-m))."""
    n = params.n_emitters
    arr = _check_m(m, n)
    return np.log(arr / (n - arr)) / params.gamma


def m_of_tee(tee, params: AnalyticParams):
    """Inverse of tee_of_m: m(T) = N exp(Gamma T)/(1 + exp(Gamma T))."""
    n = params.n_emitters
    u = np.asarray(tee, dtype=float) * params.gamma
    # logistic form, stable for both signs of the exponent
    return n / (1.0 + np.exp(-u))


def shift_m(m, tau, params: AnalyticParams):
    """Excitation m' reached by sliding m along the characteristics for
    a scaled time tau: solves T(m') = T(m) + N t."""
    n = params.n_emitters
    arr = _check_m(m, n)
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0.0):
        raise ValueError("tau must be non-negative")
    emt = np.exp(-tau)
    return n * arr / (n * emt + arr * (1.0 - emt))


def _rate_continuous(m, params: AnalyticParams):
    return params.gamma * m * (params.n_emitters - m)


def population_analytic(tau, m, params: AnalyticParams):
    """Continuous population pi(t, m) propagated from pi(0, m) = exp(-lambda (N-m))."""
    n = params.n_emitters
    m_shift = shift_m(m, tau, params)
    ratio = _rate_continuous(m_shift, params) / _rate_continuous(np.asarray(m, float), params)
    return ratio * np.exp(-params.lambda_init * (n - m_shift))


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def _quad_log_ratio(log_f) -> float:
    """Integrate exp(log_f(w)) over the whole real line.

    Used for the y-integrals of the kernel formulas after the substitution
    w = log((1 - y)/y), which spreads the endpoint features (the sharp peak
    at y -> 1 at early times, the mass near y ~ lambda N e^{-tau'} at late
    times) into well-separated interior bumps on the w axis.
    """
    def f(w):
        lf = log_f(w)
        return np.exp(lf) if lf > -700.0 else 0.0

    result = quad(f, -np.inf, np.inf, full_output=1, **_QUAD_OPTS)
    if len(result) > 3:
        raise NumericsError(f"kernel quadrature failed: {result[3]}")
    return result[0]


def kernel_eq19(tau, tau_prime, params: AnalyticParams) -> float:
    """Definite-integral form of the correlation kernel (unnormalized).

    In the ratio variable v = (1 - y)/y = e^w the integrand is
    v^2 exp(-lambda N v/(v + E)) / [(1 + v)(v + D)(v + E)^2] with
    D = e^{tau'-tau}, E = e^{tau'}; it is evaluated in log space by
    adaptive quadrature to ~1e-10 relative accuracy.
    """
    if tau > tau_prime:
        tau, tau_prime = tau_prime, tau
    if tau < 0:
        raise ValueError("times must be non-negative")
    lam_n = params.lambda_n
    ln_d = tau_prime - tau
    ln_e = tau_prime

    def log_f(w):
        gap = ln_e - w
        decay = lam_n / (1.0 + np.exp(min(gap, 700.0)))
        return (
            2.0 * w
            - decay
            - np.logaddexp(0.0, w)
            - np.logaddexp(ln_d, w)
            - 2.0 * np.logaddexp(ln_e, w)
        )

    return np.exp(0.5 * (3.0 * tau_prime - tau)) * _quad_log_ratio(log_f)


def kernel_eq20(tau, tau_prime, params: AnalyticParams) -> float:
    """Large-N simplification of kernel_eq19 (unnormalized quadrature form).

    Same substitution v = (1 - y)/y: the integrand becomes
    v exp(-a' v) / [(1 + v)(v + D)] with a' = lambda N e^{-tau'}.  The
    prefactor exp(-(tau + tau')/2) is the one consistent with the closed
    form kernel_eq22; the two agree to quadrature accuracy.
    """
    if tau > tau_prime:
        tau, tau_prime = tau_prime, tau
    if tau < 0:
        raise ValueError("times must be non-negative")
    ln_ap = np.log(params.lambda_n) - tau_prime
    ln_d = tau_prime - tau

    def log_f(w):
        expo = ln_ap + w
        return (
            2.0 * w
            - (np.exp(expo) if expo < 700.0 else np.inf)
            - np.logaddexp(0.0, w)
            - np.logaddexp(ln_d, w)
        )

    return np.exp(-0.5 * (tau + tau_prime)) * _quad_log_ratio(log_f)


def kernel_eq22(tau, tau_prime, params: AnalyticParams):
    """Exponential-integral closed form of the kernel (unnormalized).

    Stable rearrangement in terms of the scaled integral S(x) = exp(x) E1(x):

        exp(-(tau+tau')/2) * [S(A) + (S(A) - S(A')) / expm1(tau' - tau)]

    with A = lambda N exp(-tau), A' = lambda N exp(-tau'); all exponentially
    large factors cancel, so the value is finite for any N.  Symmetric in
    its time arguments; the diagonal limit is intensity_eq24.
    """
    tau = np.asarray(tau, dtype=float)
    tau_prime = np.asarray(tau_prime, dtype=float)
    if np.any(tau < 0) or np.any(tau_prime < 0):
        raise ValueError("times must be non-negative")
    if np.any(tau == tau_prime):
        raise ValueError("equal times: use intensity_eq24 for the diagonal")
    delta = tau_prime - tau
    s_a = e1_scaled(params.lambda_n * np.exp(-tau))
    s_ap = e1_scaled(params.lambda_n * np.exp(-tau_prime))
    return np.exp(-0.5 * (tau + tau_prime)) * (s_a + (s_a - s_ap) / np.expm1(delta))


def kernel_eq23(tau, tau_prime, params: AnalyticParams):
    """Logarithmic closed form sqrt(x x') (s(x) - s(x'))/(x' - x) with
    s(x) = log(1 + beta x)/x (unnormalized).

    Rearranged so the x' -> x limit is evaluated without cancellation; the
    diagonal limit is intensity_eq25.
    """
    tau = np.asarray(tau, dtype=float)
    tau_prime = np.asarray(tau_prime, dtype=float)
    if np.any(tau < 0) or np.any(tau_prime < 0):
        raise ValueError("times must be non-negative")
    if np.any(tau == tau_prime):
        raise ValueError("equal times: use intensity_eq25 for the diagonal")
    beta = params.beta
    x = np.exp(tau)
    xp = np.exp(tau_prime)
    d = x * np.expm1(tau_prime - tau)  # x' - x without cancellation
    lp = np.log1p(beta * xp)
    diff = np.log1p(-beta * d / (1.0 + beta * xp))  # log(1+bx) - log(1+bx')
    return (xp * diff / d + lp) / np.sqrt(x * xp)


# ---------------------------------------------------------------------------
# intensities
# ---------------------------------------------------------------------------

def intensity_eq24(tau, params: AnalyticParams):
    """Diagonal of kernel_eq22: exp(-tau) [(1 + a) S(a) - 1], a = lambda N exp(-tau).

    Positive for all tau by the bound S(a) > 1/(1 + a); unnormalized.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    a = params.lambda_n * np.exp(-tau)
    return np.exp(-tau) * ((1.0 + a) * e1_scaled(a) - 1.0)


def intensity_eq25(tau, params: AnalyticParams):
    """Diagonal of kernel_eq23: log(1 + beta e^tau)/e^tau - beta/(1 + beta e^tau)."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    u = params.beta * np.exp(tau)
    return np.log1p(u) / np.exp(tau) - params.beta / (1.0 + u)


def meanfield_delay(params: AnalyticParams) -> float:
    """Classical burst delay t_D = ln(N)/(N Gamma)."""
    return np.log(params.n_emitters) / (params.n_emitters * params.gamma)


def intensity_meanfield(t, params: AnalyticParams):
    """Classical reference pulse (N^2 Gamma / 4) sech^2(N Gamma (t - t_D)/2).

    The prefactor makes the full-line time integral equal N.
    """
    t = np.asarray(t, dtype=float)
    n, gam = params.n_emitters, params.gamma
    u = 0.5 * n * gam * (t - meanfield_delay(params))
    sech = 2.0 * np.exp(-np.abs(u)) / (1.0 + np.exp(-2.0 * np.abs(u)))
    return 0.25 * n * n * gam * sech * sech


# ---------------------------------------------------------------------------
# grid sampling and normalization
# ---------------------------------------------------------------------------

def normalize_to_photons(values, grid: TimeGrid, params: AnalyticParams):
    """Rescale intensity samples (1-D) or a kernel (2-D / CorrelationKernel)
    so the time-integrated intensity — the kernel diagonal — equals N."""
    if isinstance(values, CorrelationKernel):
        scale = _photon_scale(values.diagonal, values.grid, params)
        return CorrelationKernel(values.grid, values.values * scale)
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        return arr * _photon_scale(arr, grid, params)
    if arr.ndim == 2:
        return arr * _photon_scale(np.diagonal(arr), grid, params)
    raise ValueError("expected intensity samples or a kernel")


def _photon_scale(diag_samples, grid: TimeGrid, params: AnalyticParams) -> float:
    total = grid.quadrature(diag_samples)
    if total <= 0.0:
        raise ValueError("cannot normalize: integrated intensity is not positive")
    return params.n_emitters / total


def sample_kernel(method: str, grid: TimeGrid, params: AnalyticParams) -> CorrelationKernel:
    """Sample one of the analytic kernels on a time grid, symmetrize and
    normalize to N photons."""
    if method not in KERNEL_METHODS:
        raise ValueError(f"method must be one of {KERNEL_METHODS}")
    tau = tau_of_t(grid.points, params)
    k = grid.n_points
    values = np.zeros((k, k))
    if method == "eq22":
        iu = np.triu_indices(k, 1)
        values[iu] = kernel_eq22(tau[iu[0]], tau[iu[1]], params)
        np.fill_diagonal(values, intensity_eq24(tau, params))
    elif method == "eq23":
        iu = np.triu_indices(k, 1)
        values[iu] = kernel_eq23(tau[iu[0]], tau[iu[1]], params)
        np.fill_diagonal(values, intensity_eq25(tau, params))
    else:
        func = kernel_eq19 if method == "eq19" else kernel_eq20
        for i in range(k):
            for j in range(i, k):
                values[i, j] = func(tau[i], tau[j], params)
    values = np.triu(values) + np.triu(values, 1).T
    return normalize_to_photons(CorrelationKernel(grid, values), grid, params)
