"""Sketching operators, embedding measurements and sketched solvers."""

from .embedding import (
    SCAN_COLUMNS,
    EmbeddingReport,
    ScanRow,
    check_orthonormal,
    coordinate_subspace,
    haar_subspace,
    measure_embedding,
    osi_scan,
    srht_hard_subspace,
    subspace_fixture,
    write_scan_csv,
)
from .operators import FAMILIES, SketchOperator, apply_sketch, coordinate_sketch, fwht, make_sketch
from .problems import RsvdResult, SketchSolveResult, randomized_svd, sketch_and_solve_ls

__all__ = [
    "FAMILIES",
    "SCAN_COLUMNS",
    "EmbeddingReport",
    "RsvdResult",
    "ScanRow",
    "SketchOperator",
    "SketchSolveResult",
    "apply_sketch",
    "check_orthonormal",
    "coordinate_sketch",
    "coordinate_subspace",
    "fwht",
    "haar_subspace",
    "make_sketch",
    "measure_embedding",
    "osi_scan",
    "randomized_svd",
    "sketch_and_solve_ls",
    "srht_hard_subspace",
    "subspace_fixture",
    "write_scan_csv",
]
