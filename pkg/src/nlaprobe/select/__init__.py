"""Column subset selection, cross approximation and Nystrom objectives."""

from .cross import (
    KERNELS,
    CrossApproximation,
    DLRProbe,
    KernelGrid,
    chebyshev_nodes,
    cross_selection,
    dlr_probe,
    fermionic_grid,
    fermionic_kernel,
    gecp_cross,
    hilbert_grid,
    pivoted_cholesky,
    rbf_grid,
)
from .cssp import (
    SelectionResult,
    brute_cssp,
    cpqr_lowrank,
    cpqr_select,
    kahan_matrix,
    projection_residual,
    rrqr_mu,
    with_oracle,
    write_selection_csv,
)
from .nystrom import (
    SubmodularityReport,
    TraceGap,
    best_trace_subset,
    diminishing_returns_check,
    elementary_symmetric,
    nystrom_error,
    path_laplacian,
    schur_horn_equal_diagonal,
    trace_cssp_worst_vs_volume,
    volume_objective,
)

__all__ = [
    "KERNELS",
    "CrossApproximation",
    "DLRProbe",
    "KernelGrid",
    "SelectionResult",
    "SubmodularityReport",
    "TraceGap",
    "best_trace_subset",
    "brute_cssp",
    "chebyshev_nodes",
    "cpqr_lowrank",
    "cpqr_select",
    "cross_selection",
    "diminishing_returns_check",
    "dlr_probe",
    "elementary_symmetric",
    "fermionic_grid",
    "fermionic_kernel",
    "gecp_cross",
    "hilbert_grid",
    "kahan_matrix",
    "nystrom_error",
    "path_laplacian",
    "pivoted_cholesky",
    "projection_residual",
    "rbf_grid",
    "rrqr_mu",
    "schur_horn_equal_diagonal",
    "trace_cssp_worst_vs_volume",
    "volume_objective",
    "with_oracle",
    "write_selection_csv",
]
