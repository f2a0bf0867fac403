"""Iterative solvers, two-grid analysis and solver experiments."""

from .experiments import (
    StoppingTimes,
    cg_error_bound,
    decay_problem,
    spd_test_matrix,
    stopping_time_experiment,
)
from .krylov import ForsytheResult, a_norm_error, cg, forsythe_iteration, gmres, minimal_polynomial_degree
from .power import PowerResult, power_method
from .rcd import ContractionEstimate, RCDTrace, rcd, rcd_contraction_experiment
from .trace import SolveTrace
from .twogrid import (
    TwoGridReport,
    TwoGridSetup,
    galerkin_setup,
    poisson_1d_setup,
    poisson_2d_setup,
    smoother_matrix,
    two_grid_contraction,
)

__all__ = [
    "ContractionEstimate",
    "ForsytheResult",
    "PowerResult",
    "RCDTrace",
    "SolveTrace",
    "StoppingTimes",
    "TwoGridReport",
    "TwoGridSetup",
    "a_norm_error",
    "cg",
    "cg_error_bound",
    "decay_problem",
    "forsythe_iteration",
    "galerkin_setup",
    "gmres",
    "minimal_polynomial_degree",
    "poisson_1d_setup",
    "poisson_2d_setup",
    "power_method",
    "rcd",
    "rcd_contraction_experiment",
    "smoother_matrix",
    "spd_test_matrix",
    "stopping_time_experiment",
    "two_grid_contraction",
]
