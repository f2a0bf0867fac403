"""Greedy cross approximation (GECP), pivoted Cholesky and kernel grids."""

import csv
import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .._errors import NotPSDError
from .cssp import SelectionResult, projection_residual


@dataclass(frozen=True)
class KernelGrid:
    """Kernel sampled on a tensor grid: ``K[i, j] = K(t[i], omega[j])``."""

    name: str
    t: np.ndarray
    omega: np.ndarray
    K: np.ndarray
    Lambda: float = None

    def to_csv(self, target) -> None:
        """First row holds the ``omega`` nodes, then one row per ``t`` node."""
        own = isinstance(target, (str, os.PathLike))
        fh = open(target, "w", newline="") if own else target
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t\\omega", *map(repr, map(float, self.omega))])
            for ti, row in zip(self.t, self.K):
                w.writerow([repr(float(ti)), *map(repr, map(float, row))])
        finally:
            if own:
                fh.close()


def fermionic_kernel(t, omega):
    """``exp(-t w) / (1 + exp(-w))``, evaluated without overflow.

    For ``w >= 0`` this is used as written; for ``w < 0`` the equivalent
    ``exp((1 - t) w) / (1 + exp(w))`` keeps every exponent nonpositive.
    """
    t = np.asarray(t, dtype=float)[:, None]
    w = np.asarray(omega, dtype=float)[None, :]
    a = np.abs(w)
    denom = 1 + np.exp(-a)
    return np.where(w >= 0, np.exp(-t * a), np.exp(-(1 - t) * a)) / denom


def chebyshev_nodes(m, a=0.0, b=1.0):
    """First-kind Chebyshev points on ``[a, b]``, sorted ascending."""
    x = np.cos((2 * np.arange(m) + 1) * np.pi / (2 * m))[::-1]
    return (a + b) / 2 + (b - a) / 2 * x


def fermionic_grid(Lambda, nt=400, nw=401) -> KernelGrid:
    """Chebyshev nodes in ``t in [0, 1]`` and uniform nodes in ``[-Lambda, Lambda]``."""
    t = chebyshev_nodes(nt)
    w = np.linspace(-Lambda, Lambda, nw)
    return KernelGrid("fermionic", t, w, fermionic_kernel(t, w), float(Lambda))


def hilbert_grid(n) -> KernelGrid:
    """Hilbert matrix ``1 / (i + j + 1)``, as a kernel on integer nodes."""
    i = np.arange(n, dtype=float)
    return KernelGrid("hilbert", i, i, sla.hilbert(n))


def rbf_grid(n, length_scale=0.1) -> KernelGrid:
    """Gaussian kernel ``exp(-|x - y|^2 / (2 l^2))`` on ``n`` uniform points of ``[0, 1]``."""
    x = np.linspace(0, 1, n)
    K = np.exp(-((x[:, None] - x[None, :]) ** 2) / (2 * length_scale**2))
    return KernelGrid("rbf", x, x, K)


KERNELS = {"fermionic": fermionic_grid, "hilbert": hilbert_grid, "rbf": rbf_grid}


@dataclass
class CrossApproximation:
    """``K_hat = C U^{-1} R`` with ``C = M[:, J]``, ``U = M[I, J]``, ``R = M[I, :]``.

    ``U`` is kept as an LU factorization; ``errors[j]`` is the max-norm of the
    elimination residual after ``j`` pivots.
    """

    I: np.ndarray
    J: np.ndarray
    C: np.ndarray
    R: np.ndarray
    lu: tuple
    errors: np.ndarray
    requested_k: int

    @property
    def k(self):
        return len(self.I)

    def evaluate(self, rows=None, cols=None) -> np.ndarray:
        """Dense block of ``K_hat`` (all rows/columns by default)."""
        C = self.C if rows is None else self.C[rows]
        R = self.R if cols is None else self.R[:, cols]
        if self.k == 0:
            return np.zeros((C.shape[0], R.shape[1]))
        return C @ sla.lu_solve(self.lu, R)

    def max_error(self, M) -> float:
        return float(np.abs(np.asarray(M) - self.evaluate()).max())


def gecp_cross(M, k, pivot_tol=1e-14) -> CrossApproximation:
    """Gaussian elimination with complete pivoting as a greedy cross approximation.

    Step ``j`` picks the entry of largest magnitude in the current residual
    (lowest row-major index on ties) and eliminates its row and column.
    Stops early, with fewer than ``k`` pivots, once the pivot falls below
    ``pivot_tol * max|M|``.
    """
    if isinstance(M, KernelGrid):
        M = M.K
    M = np.asarray(M, dtype=float)
    E = M.copy()
    scale = np.abs(M).max() if M.size else 0.0
    I, J = [], []
    errors = [scale]
    for _ in range(min(k, *M.shape)):
        idx = int(np.argmax(np.abs(E)))
        i, j = divmod(idx, E.shape[1])
        p = E[i, j]
        if abs(p) <= pivot_tol * scale or scale == 0:
            break
        E -= np.outer(E[:, j], E[i, :] / p)
        E[i, :] = 0.0
        E[:, j] = 0.0
        I.append(i)
        J.append(j)
        errors.append(float(np.abs(E).max()))
    I, J = np.array(I, dtype=int), np.array(J, dtype=int)
    lu = sla.lu_factor(M[np.ix_(I, J)]) if len(I) else None
    return CrossApproximation(I, J, M[:, J], M[I, :], lu, np.array(errors), int(k))


def cross_selection(M, k) -> SelectionResult:
    """GECP column choice reported as a CSSP selection of ``M``."""
    ca = gecp_cross(M, k)
    M = M.K if isinstance(M, KernelGrid) else np.asarray(M, dtype=float)
    hist = [projection_residual(M, ca.J[:j]) for j in range(ca.k + 1)]
    return SelectionResult(tuple(map(int, ca.J)), hist[-1], projection_residual(M, ca.J, "spectral"),
                           tuple(hist), tuple(map(int, ca.I)))


def pivoted_cholesky(K, k, psd_tol=1e-12, rank_tol=1e-14) -> SelectionResult:
    """Greedy diagonal pivoting on a symmetric psd ``K``.

    ``history[j]`` is the trace of the Schur-complement residual after ``j``
    pivots. Residual diagonal entries in ``[-psd_tol ||K||, 0)`` are rounding
    and are set to zero; anything more negative raises :class:`NotPSDError`.
    Stops early once the largest residual diagonal is at most
    ``rank_tol * max diag(K)``. ``fro`` is ``sqrt(trace residual)``, the CSSP
    Frobenius residual of any ``A`` with ``A^T A = K``; ``spectral`` is the
    spectral norm of the Schur-complement residual.
    """
    K = np.asarray(K, dtype=float)
    n = K.shape[0]
    if not np.allclose(K, K.T, rtol=0, atol=1e-14 * max(np.abs(K).max(), 1e-300)):
        raise NotPSDError("matrix must be symmetric")
    scale = np.abs(K).max() if K.size else 0.0
    L = np.zeros((n, min(k, n)))
    d = np.diag(K).astype(float).copy()
    dmax = d.max() if n else 0.0
    J = []
    hist = []
    for j in range(min(k, n)):
        if np.any(d < -psd_tol * scale):
            raise NotPSDError(f"residual diagonal {d.min():.3e} is negative")
        d = np.maximum(d, 0.0)
        d[J] = 0.0
        hist.append(float(d.sum()))
        p = int(np.argmax(d))
        if d[p] <= rank_tol * dmax:
            break
        col = K[:, p] - L[:, :j] @ L[p, :j]
        L[:, j] = col / np.sqrt(d[p])
        d = d - L[:, j] ** 2
        J.append(p)
    if np.any(d < -psd_tol * scale):
        raise NotPSDError(f"residual diagonal {d.min():.3e} is negative")
    d = np.maximum(d, 0.0)
    d[J] = 0.0
    hist.append(float(d.sum()))
    Lj = L[:, :len(J)]
    res = K - Lj @ Lj.T
    top = float(np.linalg.eigvalsh((res + res.T) / 2).max()) if n else 0.0
    return SelectionResult(tuple(J), float(np.sqrt(hist[-1])), max(top, 0.0), tuple(hist))


@dataclass(frozen=True)
class DLRProbe:
    """Smallest ``k`` with ``||K - K_hat||_max <= eps`` and reference rates."""

    Lambda: float
    eps: float
    k: int
    error: float
    errors: np.ndarray
    linear_rate: float
    log_rate: float


def dlr_probe(Lambda=100.0, eps=1e-6, kmax=80, nt=400, nw=401) -> DLRProbe:
    """Run GECP on the fermionic grid and find the first ``k`` meeting ``eps``.

    The error for each ``k`` is the max-norm of ``K - K_hat`` with ``K_hat``
    rebuilt from the cross formula, not the elimination residual. ``k = -1``
    means ``eps`` was not reached within ``kmax`` pivots. ``linear_rate`` is
    ``Lambda + log(1/eps)`` and ``log_rate`` is ``log(Lambda) log(1/eps)``.
    """
    grid = fermionic_grid(Lambda, nt, nw)
    ca = gecp_cross(grid, kmax)
    errs = []
    found, ferr = -1, np.nan
    for j in range(1, ca.k + 1):
        I, J = ca.I[:j], ca.J[:j]
        approx = grid.K[:, J] @ np.linalg.solve(grid.K[np.ix_(I, J)], grid.K[I, :])
        e = float(np.abs(grid.K - approx).max())
        errs.append(e)
        if e <= eps:
            found, ferr = j, e
            break
    return DLRProbe(float(Lambda), float(eps), found, ferr, np.array(errs),
                    float(Lambda + np.log(1 / eps)), float(np.log(Lambda) * np.log(1 / eps)))
