"""Desk-scale numerical linear algebra experiments.

Subpackages: ``core_la`` (sparse storage and dense factorizations),
``pde_bench`` (finite-difference generators and matrix classes), ``solvers``
(CG, GMRES, randomized coordinate descent, two-grid, Forsythe iteration),
``sketch`` (random embeddings), ``select`` (column and cross selection,
Nyström), ``spectral`` (eigenvalue conditioning, sign polynomials), ``tt``
(tensor trains) and ``cli`` (experiment runner).
"""

from . import core_la, pde_bench, select, sketch, solvers, spectral, tt
from ._errors import (
    BudgetExceededError,
    ConvergenceError,
    NotPSDError,
    NotSPDError,
    RankDeficientError,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ConvergenceError",
    "NotPSDError",
    "NotSPDError",
    "RankDeficientError",
    "core_la",
    "pde_bench",
    "select",
    "sketch",
    "solvers",
    "spectral",
    "tt",
]
