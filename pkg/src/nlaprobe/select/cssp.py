"""Column subset selection: greedy CPQR, exhaustive oracle, rank-revealing factor."""

import csv
import itertools
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .._errors import BudgetExceededError
from ..core_la import dense_svd, householder_qr


@dataclass(frozen=True)
class SelectionResult:
    """Selected column indices ``J`` (and rows ``I`` for two-sided methods).

    ``fro`` and ``spectral`` are the norms of ``A - Pi_J A``; ``history[j]``
    is the Frobenius residual (or trace residual, for Cholesky) after ``j``
    selections. ``optimal`` and ``ratio = fro / optimal`` (or spectral, per
    ``norm``) are filled in by :func:`with_oracle`.
    """

    J: tuple
    fro: float
    spectral: float
    history: tuple = ()
    I: tuple = None
    optimal: float = None
    ratio: float = None
    norm: str = "fro"

    @property
    def k(self):
        return len(self.J)


def projection_residual(A, J, norm="fro") -> float:
    """``||A - Pi_J A||`` with ``Pi_J`` the orthogonal projector onto ``range(A[:, J])``."""
    A = np.asarray(A)
    J = list(J)
    if not J:
        R = A
    else:
        Q, _ = np.linalg.qr(A[:, J])
        R = A - Q @ (Q.conj().T @ A)
    if norm == "fro":
        return float(np.linalg.norm(R))
    if norm == "spectral":
        return float(dense_svd(R).singular_values[0]) if R.size else 0.0
    raise ValueError(f"unknown norm {norm!r}")


def _result(A, J, history=(), I=None):
    return SelectionResult(tuple(int(j) for j in J), projection_residual(A, J, "fro"),
                           projection_residual(A, J, "spectral"), tuple(history),
                           None if I is None else tuple(int(i) for i in I))


def cpqr_select(A, k) -> SelectionResult:
    """First ``k`` pivots of greedy column-pivoted Householder QR."""
    A = np.asarray(A, dtype=float)
    if not 1 <= k <= min(A.shape):
        raise ValueError("need 1 <= k <= min(m, n)")
    _, R, perm = householder_qr(A, pivoting=True)
    hist = [float(np.linalg.norm(R[j:, :])) for j in range(k + 1)]
    return _result(A, perm[:k], hist)


def brute_cssp(A, k, norm="fro", budget=10**6) -> SelectionResult:
    """Exact CSSP minimizer by enumerating all ``C(n, k)`` column subsets.

    Ties keep the lexicographically first subset.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[1]
    if math.comb(n, k) > budget:
        raise BudgetExceededError(f"C({n},{k}) = {math.comb(n, k)} subsets exceed the budget {budget}")
    best, bestJ = np.inf, None
    for J in itertools.combinations(range(n), k):
        v = projection_residual(A, J, norm)
        if v < best:
            best, bestJ = v, J
    res = _result(A, bestJ)
    return replace(res, optimal=best, ratio=1.0, norm=norm)


def with_oracle(res: SelectionResult, A, norm="fro") -> SelectionResult:
    """Attach the exhaustive optimum and the quasi-optimality ratio."""
    opt = brute_cssp(A, len(res.J), norm).optimal
    val = res.fro if norm == "fro" else res.spectral
    ratio = 1.0 if opt == 0 and val <= 1e-13 * np.linalg.norm(A) else (val / opt if opt > 0 else np.inf)
    return replace(res, optimal=opt, ratio=ratio, norm=norm)


def rrqr_mu(A, A_k, k) -> float:
    """Smallest ``mu`` for which both rank-revealing inequalities hold.

    Compares ``sigma_i(A_k)`` with ``sigma_i(A)`` for ``i <= k`` and
    ``sigma_i(A - A_k)`` with ``sigma_{k+i}(A)`` for the remaining indices,
    taking the worse of each ratio and its reciprocal. ``0/0`` counts as 1.
    """
    A = np.asarray(A, dtype=float)
    A_k = np.asarray(A_k, dtype=float)
    sA = dense_svd(A).singular_values
    sK = dense_svd(A_k).singular_values
    sE = dense_svd(A - A_k).singular_values
    p = len(sA)
    scale = sA[0] if p else 0.0
    tiny = 1e-14 * scale

    def worst(x, y):
        if x <= tiny and y <= tiny:
            return 1.0
        if x <= tiny or y <= tiny:
            return np.inf
        return max(x / y, y / x)

    mu = 1.0
    for i in range(min(k, p)):
        mu = max(mu, worst(sK[i], sA[i]))
    for i in range(p - k):
        mu = max(mu, worst(sE[i], sA[k + i]))
    return float(mu)


def cpqr_lowrank(A, k) -> np.ndarray:
    """Rank-``k`` approximation ``Q_1 R_1`` from the first ``k`` CPQR steps."""
    Q, R, perm = householder_qr(np.asarray(A, dtype=float), pivoting=True)
    B = Q[:, :k] @ R[:k, :]
    out = np.empty_like(B)
    out[:, perm] = B
    return out


def kahan_matrix(n, theta=1.2, tau=1e-7) -> np.ndarray:
    """Kahan's upper-triangular matrix ``diag(1, s, .., s^{n-1}) (I - c N)``.

    ``N`` is the strictly upper triangular matrix of ones, ``c = cos(theta)``,
    ``s = sin(theta)``. All columns have unit norm, so column ``j`` is scaled
    by ``(1 - tau)^j`` to make greedy pivoting keep the natural order.
    """
    c, s = np.cos(theta), np.sin(theta)
    K = np.eye(n) - c * np.triu(np.ones((n, n)), 1)
    K = (s ** np.arange(n))[:, None] * K
    return K * (1 - tau) ** np.arange(n)


def write_selection_csv(target, res: SelectionResult) -> None:
    own = isinstance(target, (str, os.PathLike))
    fh = open(target, "w", newline="") if own else target
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "index", "row_index", "residual"])
        for j, col in enumerate(res.J):
            row = res.I[j] if res.I is not None else ""
            hist = repr(res.history[j + 1]) if len(res.history) > j + 1 else ""
            w.writerow([j + 1, col, row, hist])
    finally:
        if own:
            fh.close()
