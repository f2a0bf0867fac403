"""Krylov solvers: CG, restarted GMRES and the restarted s-step CG iteration."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .._errors import NotSPDError
from ..core_la import dense_eig
from .trace import SolveTrace


def _prep(A, b, x0):
    b = np.asarray(b)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise ValueError(f"dimension mismatch: A is {A.shape}, b has shape {b.shape}")
    dtype = np.result_type(A.dtype, b.dtype, float)
    x = np.zeros(n, dtype) if x0 is None else np.array(x0, dtype=dtype)
    return b.astype(dtype, copy=False), x


def a_norm_error(A, x, x_star) -> float:
    e = x - x_star
    return float(np.sqrt(max(np.vdot(e, A @ e).real, 0.0)))


def cg(A, b, x0=None, eps=1e-10, maxit=None, x_star=None, stop="residual") -> SolveTrace:
    """Conjugate gradients for Hermitian positive definite ``A``.

    Stops when ``||r|| <= eps ||b||`` (``stop="residual"``) or, with the true
    solution ``x_star`` supplied, when ``||x - x*||_A**2 <= eps ||x0 - x*||_A**2``
    (``stop="aerr"``). Every iteration is one epoch. Raises ``NotSPDError``
    if a search direction has ``p* A p <= 0``.
    """
    b, x = _prep(A, b, x0)
    n = len(b)
    maxit = 10 * n if maxit is None else maxit
    if stop not in ("residual", "aerr"):
        raise ValueError(f"unknown stopping rule {stop!r}")
    if stop == "aerr" and x_star is None:
        raise ValueError("stop='aerr' needs x_star")

    track = x_star is not None
    r = b - A @ x
    rr = np.vdot(r, r).real
    trace = SolveTrace()
    e0 = a_norm_error(A, x, x_star) if track else np.nan
    trace.record(0, 0, np.sqrt(rr), e0)

    def done(rr, e):
        if stop == "aerr":
            return e * e <= eps * e0 * e0
        return np.sqrt(rr) <= eps * np.linalg.norm(b)

    if done(rr, e0) or rr == 0:
        trace.converged, trace.x = True, x
        return trace
    p = r.copy()
    for k in range(1, maxit + 1):
        Ap = A @ p
        pAp = np.vdot(p, Ap).real
        if pAp <= 0:
            raise NotSPDError(f"p*Ap = {pAp:.3e} <= 0 at iteration {k}")
        alpha = rr / pAp
        x = x + alpha * p
        r = r - alpha * Ap
        rr_new = np.vdot(r, r).real
        e = a_norm_error(A, x, x_star) if track else np.nan
        trace.record(k, k, np.sqrt(rr_new), e)
        if done(rr_new, e) or rr_new == 0:
            trace.converged = True
            break
        p = r + (rr_new / rr) * p
        rr = rr_new
    trace.x = x
    return trace


def _givens(a, b):
    """Rotation ``(c, s)`` with ``[c s; -conj(s) c] [a; b] = [t; 0]``."""
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, 1.0
    t = np.hypot(abs(a), abs(b))
    return abs(a) / t, (a / abs(a)) * np.conj(b) / t


def gmres(A, b, x0=None, restart=50, eps=1e-10, maxit=None) -> SolveTrace:
    """Restarted GMRES with modified Gram-Schmidt Arnoldi and Givens rotations.

    ``restart=None`` disables restarting. Converged when ``||r|| <= eps ||b||``;
    the recorded residuals are the least-squares estimates ``|g_{j+1}|``, which
    never increase within a cycle. A happy breakdown ends the solve as
    converged. ``maxit`` caps the total number of matvecs (epochs).
    """
    b, x = _prep(A, b, x0)
    n = len(b)
    m = n if restart is None else min(int(restart), n)
    maxit = 10 * n if maxit is None else maxit
    tol = eps * np.linalg.norm(b)
    dtype = x.dtype

    r = b - A @ x
    beta = np.linalg.norm(r)
    trace = SolveTrace()
    trace.record(0, 0, beta)
    it = 0
    while beta > tol and it < maxit:
        V = np.zeros((n, m + 1), dtype)
        H = np.zeros((m + 1, m), dtype)
        cs = np.zeros(m)
        sn = np.zeros(m, dtype)
        g = np.zeros(m + 1, dtype)
        g[0] = beta
        V[:, 0] = r / beta
        breakdown = False
        k = 0
        for j in range(m):
            w = A @ V[:, j]
            it += 1
            for i in range(j + 1):
                H[i, j] = np.vdot(V[:, i], w)
                w = w - H[i, j] * V[:, i]
            hnext = np.linalg.norm(w)
            H[j + 1, j] = hnext
            for i in range(j):
                hi, hi1 = H[i, j], H[i + 1, j]
                H[i, j] = cs[i] * hi + sn[i] * hi1
                H[i + 1, j] = -np.conj(sn[i]) * hi + cs[i] * hi1
            cs[j], sn[j] = _givens(H[j, j], H[j + 1, j])
            H[j, j] = cs[j] * H[j, j] + sn[j] * H[j + 1, j]
            H[j + 1, j] = 0
            g[j + 1] = -np.conj(sn[j]) * g[j]
            g[j] = cs[j] * g[j]
            k = j + 1
            trace.record(it, it, abs(g[j + 1]))
            breakdown = hnext <= 1e-14 * abs(H[j, j])
            if breakdown or abs(g[j + 1]) <= tol or it >= maxit:
                break
            V[:, j + 1] = w / hnext
        y = sla.solve_triangular(H[:k, :k], g[:k])
        x = x + V[:, :k] @ y
        r = b - A @ x
        beta = np.linalg.norm(r)
        if breakdown:
            trace.converged = True
            break
    trace.converged = trace.converged or beta <= tol
    trace.x = x
    return trace


# --- restarted s-step CG --------------------------------------------------


@dataclass
class ForsytheResult:
    """Output of :func:`forsythe_iteration`.

    ``Y[k]`` is the unit residual direction ``y_k``. ``log_rnorm[k]`` is
    ``log ||r_k||`` and ``log_enorm[k]`` is ``log ||x - x_k||_A``, both
    tracked through the normalized recursion so they never underflow.
    ``even_increments[k] = ||y_{2k+2} - y_{2k}||`` and likewise for odd.
    ``orth_defects[k] = ||V_s^T y_{k+1}||`` for the Krylov basis of restart k.
    ``terminated`` flags an exact (numerical) termination, r_k = 0 or a
    Krylov basis of rank below s.
    """

    Y: np.ndarray
    log_rnorm: np.ndarray
    log_enorm: np.ndarray
    orth_defects: np.ndarray
    terminated: bool

    @property
    def even_increments(self):
        return np.linalg.norm(self.Y[2::2] - self.Y[:-2:2], axis=1)

    @property
    def odd_increments(self):
        return np.linalg.norm(self.Y[3::2] - self.Y[1:-2:2], axis=1)


def minimal_polynomial_degree(A, rtol=1e-10) -> int:
    """Number of distinct eigenvalues of a symmetric matrix, up to ``rtol``."""
    w = dense_eig(np.asarray(A), symmetric=True).eigenvalues
    scale = max(np.abs(w).max(), np.finfo(float).tiny)
    return int(1 + np.sum(np.diff(w) > rtol * scale))


def forsythe_iteration(A, b, x0, s: int, K: int, rank_tol=1e-12) -> ForsytheResult:
    """Run ``K`` restarts of ``s``-step CG and record the residual directions.

    Restart ``k`` starts from ``x_k``, builds an orthonormal basis ``V`` of
    ``K_s(A, y_k)`` (Arnoldi with two Gram-Schmidt passes), and solves the
    Galerkin condition ``V^T r_{k+1} = 0`` with one step of iterative
    refinement. Working with ``y_k`` instead of ``r_k`` keeps every restart
    on the unit scale; the norms are accumulated in log form.

    ``A`` must be symmetric positive definite and dense, with
    ``1 <= s < d(A)`` where ``d(A)`` is the number of distinct eigenvalues.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if not np.array_equal(A, A.T):
        raise NotSPDError("matrix must be symmetric")
    if s < 1 or s >= minimal_polynomial_degree(A):
        raise ValueError("need 1 <= s < d(A), the minimal polynomial degree")
    L = sla.cho_factor(A)
    r = np.asarray(b, float) - A @ np.asarray(x0, float)
    rho = np.linalg.norm(r)
    Ys, logr, loge, orth = [], [], [], []
    if rho == 0:
        return ForsytheResult(np.zeros((0, n)), np.array([]), np.array([]), np.array([]), True)
    y = r / rho
    Ys.append(y)
    logr.append(np.log(rho))
    loge.append(np.log(rho) + 0.5 * np.log(y @ sla.cho_solve(L, y)))
    terminated = False
    for _ in range(K):
        V = np.zeros((n, s))
        V[:, 0] = y
        for j in range(1, s):
            w = A @ V[:, j - 1]
            scale = np.linalg.norm(w)
            for _pass in range(2):
                w = w - V[:, :j] @ (V[:, :j].T @ w)
            nw = np.linalg.norm(w)
            if nw <= rank_tol * scale:
                terminated = True
                break
            V[:, j] = w / nw
        if terminated:
            break
        AV = A @ V
        G = V.T @ AV
        c = np.linalg.solve(G, V.T @ y)
        w = y - AV @ c
        c = c + np.linalg.solve(G, V.T @ w)
        w = y - AV @ c
        nw = np.linalg.norm(w)
        if nw <= rank_tol:
            terminated = True
            break
        y = w / nw
        orth.append(np.linalg.norm(V.T @ y))
        Ys.append(y)
        logr.append(logr[-1] + np.log(nw))
        loge.append(logr[-1] + 0.5 * np.log(y @ sla.cho_solve(L, y)))
    return ForsytheResult(np.array(Ys), np.array(logr), np.array(loge), np.array(orth), terminated)
