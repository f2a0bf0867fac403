"""Randomized coordinate descent with diagonal-proportional sampling."""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .. import _rng
from .._errors import NotSPDError
from ..core_la import as_csr
from .krylov import a_norm_error
from .trace import SolveTrace


class _Rows:
    """Row access for dense arrays and CSR matrices alike."""

    def __init__(self, A):
        if sp.issparse(A):
            self.csr = as_csr(A)
            self.dense = None
            self.diag = self.csr.diagonal()
        else:
            self.dense = np.asarray(A)
            self.csr = None
            self.diag = np.diagonal(self.dense).copy()

    def dot(self, i, x):
        if self.dense is not None:
            return self.dense[i] @ x
        lo, hi = self.csr.indptr[i], self.csr.indptr[i + 1]
        return self.csr.data[lo:hi] @ x[self.csr.indices[lo:hi]]

    def norm(self, i):
        if self.dense is not None:
            return np.linalg.norm(self.dense[i])
        lo, hi = self.csr.indptr[i], self.csr.indptr[i + 1]
        return np.linalg.norm(self.csr.data[lo:hi])


@dataclass
class RCDTrace(SolveTrace):
    """:class:`SolveTrace` plus RCD bookkeeping.

    ``steps`` is the number of coordinate updates; ``row_residuals[t]`` is
    ``|A(i_t,:) x_t - b(i_t)| / (|b(i_t)| + ||A(i_t,:)|| ||x_t||)`` right after
    step ``t`` when ``check_rows`` was requested.
    """

    steps: int = 0
    row_residuals: list = None


def rcd(A, b, x0=None, eps=1e-10, max_epochs=1000, seed=0, x_star=None,
        max_steps=None, record="epoch", check_rows=False, rng=None) -> RCDTrace:
    """Randomized coordinate descent (randomized Gauss-Seidel) for SPD ``A``.

    Step ``t`` draws ``i`` with probability ``A(i,i)/tr(A)`` and sets
    ``x(i) += (b(i) - A(i,:) x) / A(i,i)``, so equation ``i`` holds exactly
    afterwards. The residual entry is recomputed from the row each step,
    which costs the same as updating a residual vector and does not drift.

    With ``x_star`` the squared A-norm error is updated in O(1) per step via
    ``||e||_A^2 -= |r(i)|^2 / A(i,i)`` and refreshed exactly at each epoch
    boundary; the run stops once ``||e||_A^2 <= eps ||e_0||_A^2``. Otherwise
    it stops when ``||r|| <= eps ||b||`` at an epoch boundary.

    ``record="epoch"`` stores a trace row per epoch (plus the final step);
    ``"step"`` stores one per step. Epoch of step ``t`` is ``ceil(t/n)``.
    """
    rows = _Rows(A)
    d = rows.diag
    if np.any(np.iscomplex(d)) or np.any(d.real <= 0):
        raise NotSPDError("RCD needs a positive diagonal")
    d = d.real
    b = np.asarray(b)
    n = len(b)
    if len(d) != n:
        raise ValueError("dimension mismatch")
    dtype = np.result_type(b.dtype, float, rows.csr.dtype if rows.csr is not None else rows.dense.dtype)
    x = np.zeros(n, dtype) if x0 is None else np.array(x0, dtype=dtype)
    rng = _rng.stream(seed, _rng.SOLVER) if rng is None else rng
    table = _rng.AliasTable(d)
    max_steps = max_epochs * n if max_steps is None else max_steps
    if record not in ("epoch", "step"):
        raise ValueError("record must be 'epoch' or 'step'")

    track = x_star is not None
    bnorm = np.linalg.norm(b)
    tr = RCDTrace(row_residuals=[] if check_rows else None)
    e2 = a_norm_error(A, x, x_star) ** 2 if track else np.nan
    e02 = e2
    tr.record(0, 0, np.linalg.norm(b - A @ x), np.sqrt(e2))

    def stopped(t):
        if track:
            return e2 <= eps * e02
        return np.linalg.norm(b - A @ x) <= eps * bnorm

    if (track and e02 == 0) or stopped(0):
        tr.converged, tr.x = True, x
        return tr
    t = 0
    while t < max_steps:
        batch = table.sample(rng, min(n, max_steps - t))
        for i in batch:
            ri = b[i] - rows.dot(i, x)
            x[i] += ri / d[i]
            t += 1
            if track:
                e2 = max(e2 - abs(ri) ** 2 / d[i], 0.0)
            if check_rows:
                scale = abs(b[i]) + rows.norm(i) * np.linalg.norm(x)
                res = abs(rows.dot(i, x) - b[i])
                tr.row_residuals.append(res / scale if scale > 0 else res)
            boundary = t % n == 0
            if boundary and track:
                e2 = a_norm_error(A, x, x_star) ** 2
            if record == "step" or boundary:
                tr.record(t, math.ceil(t / n), np.linalg.norm(b - A @ x), np.sqrt(e2))
            if track and e2 <= eps * e02:
                e2 = a_norm_error(A, x, x_star) ** 2
                if e2 <= eps * e02:
                    tr.converged = True
                    break
        if tr.converged:
            break
        if not track and t % n == 0 and stopped(t):
            tr.converged = True
            break
    if tr.iterations[-1] != t:
        tr.record(t, math.ceil(t / n), np.linalg.norm(b - A @ x), np.sqrt(e2))
    tr.steps = t
    tr.x = x
    return tr


@dataclass(frozen=True)
class ContractionEstimate:
    mean: float
    stderr: float
    expected: float
    trials: int

    @property
    def z_score(self):
        return (self.mean - self.expected) / self.stderr if self.stderr > 0 else 0.0


def rcd_contraction_experiment(A, trials=10_000, seed=0) -> ContractionEstimate:
    """Monte Carlo estimate of the one-step RCD contraction of ``||e||_A^2``.

    Each trial runs a single RCD step from ``x* + v`` with ``v`` the unit
    eigenvector of ``lambda_min(A)``. From that start the expected ratio is
    exactly ``1 - lambda_min / tr(A)`` (for other starts it is only an upper
    bound), which is returned as ``expected``.
    """
    A = np.asarray(A.toarray() if sp.issparse(A) else A)
    w, V = np.linalg.eigh(A)
    v = V[:, 0]
    n = A.shape[0]
    x_star = np.zeros(n)
    b = np.zeros(n)
    e0 = v @ A @ v
    ratios = np.empty(trials)
    for t in range(trials):
        tr = rcd(A, b, x0=v.copy(), max_steps=1, x_star=x_star, eps=0.0, record="step",
                 rng=_rng.stream(seed, t, _rng.SOLVER))
        e1 = tr.x @ A @ tr.x
        ratios[t] = e1 / e0
    expected = 1 - w[0] / np.trace(A)
    return ContractionEstimate(float(ratios.mean()), float(ratios.std(ddof=1) / np.sqrt(trials)),
                               float(expected), trials)
