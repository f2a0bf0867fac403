"""Sketch-and-solve least squares and randomized SVD probes."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .._errors import RankDeficientError
from ..core_la import dense_svd, householder_qr
from .operators import SketchOperator, apply_sketch


def _lstsq_qr(A, B):
    """Least-squares solution through Householder QR (full column rank)."""
    Q, R, perm = householder_qr(A, pivoting=False)
    X = sla.solve_triangular(R, Q.conj().T @ B)
    return X


@dataclass(frozen=True)
class SketchSolveResult:
    X: np.ndarray
    residual: float
    optimal_residual: float
    ratio: float
    alpha: float

    def __iter__(self):
        return iter((self.X, self.ratio))


def sketch_and_solve_ls(A, B, op: SketchOperator, rank_tol=1e-12) -> SketchSolveResult:
    """``X~ = (Omega^T A)^+ (Omega^T B)`` and its residual ratio to the optimum.

    ``ratio = ||A X~ - B||_F / min_X ||A X - B||_F``; when ``B`` lies in the
    range of ``A`` both residuals vanish and the ratio is reported as 1.
    ``alpha`` is the injectivity of ``Omega`` on ``range(A)``. Raises
    :class:`RankDeficientError` (carrying ``alpha``) if ``Omega^T A`` loses rank.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    vec = B.ndim == 1
    B2 = B[:, None] if vec else B
    QA = householder_qr(A).Q
    sA = dense_svd(apply_sketch(op, QA)).singular_values
    d = A.shape[1]
    alpha = float(sA[-1] ** 2) if len(sA) == d else 0.0
    if alpha <= rank_tol ** 2 or len(sA) < d:
        raise RankDeficientError("sketched matrix is rank deficient", alpha=alpha)
    X = _lstsq_qr(apply_sketch(op, A), apply_sketch(op, B2))
    Xopt = _lstsq_qr(A, B2)
    res = np.linalg.norm(A @ X - B2)
    opt = np.linalg.norm(A @ Xopt - B2)
    scale = np.linalg.norm(B2) + np.linalg.norm(A) * np.linalg.norm(Xopt)
    floor = 1e-13 * scale
    if opt <= floor:
        ratio = 1.0 if res <= floor else np.inf
    else:
        ratio = res / opt
    return SketchSolveResult(X[:, 0] if vec else X, float(res), float(opt), float(ratio), alpha)


@dataclass(frozen=True)
class RsvdResult:
    """Projection ``A~ = P A`` onto ``range(A Omega)`` and its error ratios.

    ``ratio = ||A - A~||_F / ||A - A_r||_F`` follows the projection formula
    literally; ``A~`` has rank up to ``k``, so for ``k > r`` the ratio may drop
    below 1. ``ratio_truncated`` uses the best rank-``r`` part of ``A~``
    instead and is never below 1.
    """

    Q: np.ndarray
    rank: int
    error: float
    error_truncated: float
    optimal_error: float
    ratio: float
    ratio_truncated: float

    def __iter__(self):
        return iter((self.Q, self.ratio))


def randomized_svd(A, op: SketchOperator, r: int, rank_tol=1e-12) -> RsvdResult:
    """Range finder ``A Omega`` followed by projection, compared with ``A_r``.

    ``Omega`` acts on the columns of ``A`` (``op.n == A.shape[1]``).
    """
    A = np.asarray(A, dtype=float)
    if op.k < r:
        raise ValueError("need k >= r")
    Y = apply_sketch(op, A.T).T  # A Omega
    U, s, _ = dense_svd(Y)
    rank = int(np.sum(s > rank_tol * s[0])) if len(s) and s[0] > 0 else 0
    Q = U[:, :rank]
    PA = Q @ (Q.T @ A)
    err = np.linalg.norm(A - PA)
    Ub, sb, Vb = dense_svd(PA)
    PA_r = (Ub[:, :r] * sb[:r]) @ Vb[:, :r].T
    err_t = np.linalg.norm(A - PA_r)
    sA = dense_svd(A).singular_values
    opt = float(np.sqrt(np.sum(sA[r:] ** 2)))
    floor = 1e-13 * max(sA[0], np.finfo(float).tiny) if len(sA) else 0.0

    def ratio(e):
        if opt <= floor:
            return 1.0 if e <= floor * np.sqrt(min(A.shape)) else np.inf
        return e / opt

    return RsvdResult(Q, rank, float(err), float(err_t), opt, float(ratio(err)), float(ratio(err_t)))
