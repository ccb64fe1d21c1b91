"""Temporal radiation eigenmodes of Dicke superradiance.

Three independent pipelines compute the photon occupations and temporal
mode shapes of the superradiant burst from N compact two-level emitters:

  exact      population cascade + quantum regression + Nystrom diagonalization
  analytic   closed-form correlation kernels of the continuous-m model
  appendix   g-function recurrence and Gram eigenproblem for very large N

and cross-validate each other on overlapping scales.
"""

from .analytic import (
    AnalyticParams,
    ScaledTime,
    analytic_time_window,
    intensity_eq24,
    intensity_eq25,
    intensity_meanfield,
    kernel_eq19,
    kernel_eq20,
    kernel_eq22,
    kernel_eq23,
    m_of_tee,
    meanfield_delay,
    normalize_to_photons,
    population_analytic,
    sample_kernel,
    scaled_time,
    shift_m,
    tau_of_t,
    tee_of_m,
)
from .errors import NumericsError
from .expint import e1, e1_scaled, ei_neg_approx
from .grids import TimeGrid
from .ladder import (
    DickeParams,
    PopulationState,
    PopulationTrajectory,
    auto_time_window,
    collective_rate,
    collective_rates,
    emitted_photons,
    evolve,
    intensity,
    master_rhs,
)
from .largen import (
    GFunctionSet,
    GramProblem,
    assemble_modes,
    build_gset,
    g1,
    mode_fractions,
    next_g,
    overlap_matrix,
    raw_photon_total,
    reconstruct_kernel,
    recurrence_residual,
    solve_modes,
)
from .modes import ModeSet, decompose, mode_overlap, occupation_fractions
from .regression import (
    CoherenceState,
    CorrelationKernel,
    build_kernel,
    correlation_row,
    coupling_coefficients,
    regression_rhs,
    seed_coherence,
)

__version__ = "0.1.0"
