"""Eigenvalue conditioning experiments and composite sign polynomials."""

from .conditioning import (
    EigCondition,
    MinamiResult,
    ShatteringResult,
    fit_exponent,
    ginibre,
    kappa_eig,
    min_gap,
    minami_gap_experiment,
    shattering_experiment,
    toeplitz_tridiag,
    write_histogram_csv,
)
from .sign import MU, CompositionScheme, CompositionValue, SignError, eval_composition, sign_error

__all__ = [
    "MU",
    "CompositionScheme",
    "CompositionValue",
    "EigCondition",
    "MinamiResult",
    "ShatteringResult",
    "SignError",
    "eval_composition",
    "fit_exponent",
    "ginibre",
    "kappa_eig",
    "min_gap",
    "minami_gap_experiment",
    "shattering_experiment",
    "sign_error",
    "toeplitz_tridiag",
    "write_histogram_csv",
]
