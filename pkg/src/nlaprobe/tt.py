"""Tensor-train (TT) decomposition by sequential SVD, and a quasi-optimality probe.

Tensors are numpy arrays read in generalized column-major order: the first
index varies fastest. ``matricize(X, k)`` therefore has rows indexed by
``(i_1, ..., i_k)`` and columns by ``(i_{k+1}, ..., i_n)``, each with its
first index fastest, which is ``X.reshape(rows, cols, order="F")``.

Core ``G_k`` has shape ``(chi_{k-1}, d_k, chi_k)`` with ``chi_0 = chi_n = 1``.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .core_la import dense_svd
from .core_la.sparse import _fmt, _open


def matricize(X, k: int) -> np.ndarray:
    X = np.asarray(X)
    if X.ndim < 2:
        raise ValueError("tensor needs at least two modes")
    if not 1 <= k < X.ndim:
        raise ValueError(f"split position must satisfy 1 <= k < {X.ndim}")
    return X.reshape(math.prod(X.shape[:k]), -1, order="F")


def unmatricize(M, dims) -> np.ndarray:
    return np.asarray(M).reshape(tuple(dims), order="F")


@dataclass
class TTCores:
    cores: list

    def __post_init__(self):
        if not self.cores:
            raise ValueError("empty core chain")
        prev = 1
        for G in self.cores:
            if G.ndim != 3 or G.shape[0] != prev:
                raise ValueError("core rank dimensions do not chain")
            prev = G.shape[2]
        if prev != 1:
            raise ValueError("last core must have trailing rank 1")

    @property
    def dims(self):
        return tuple(G.shape[1] for G in self.cores)

    @property
    def ranks(self):
        return tuple(G.shape[2] for G in self.cores[:-1])

    def __len__(self):
        return len(self.cores)


@dataclass
class TTSVDResult:
    """TT-SVD output.

    ``tails[e]`` is the discarded energy ``sum_{i > chi_e} sigma_i^2`` of the
    ``e``-th unfolding formed during the sweep; ``clipped`` lists edges whose
    requested rank exceeded the unfolding dimension.
    """

    tt: TTCores
    tails: np.ndarray
    clipped: list = field(default_factory=list)

    @property
    def cores(self):
        return self.tt.cores

    @property
    def ranks(self):
        return self.tt.ranks


def tt_svd(X, ranks=None, tol=None) -> TTSVDResult:
    """Left-to-right TT-SVD.

    Give either ``ranks`` (one per edge, or a single int for all edges) or
    ``tol``: a relative accuracy for which each edge keeps the smallest rank
    whose tail is at most ``tol**2 ||X||_F^2 / (n - 1)``, so the total error
    is at most ``tol ||X||_F``. With neither, full ranks are kept.

    Cores ``G_1 .. G_{n-1}`` are left-orthogonal.
    """
    X = np.asarray(X, dtype=float)
    n = X.ndim
    if n < 2:
        raise ValueError("tensor needs at least two modes")
    if ranks is not None and tol is not None:
        raise ValueError("pass ranks or tol, not both")
    if ranks is not None:
        ranks = [int(ranks)] * (n - 1) if np.isscalar(ranks) else [int(r) for r in ranks]
        if len(ranks) != n - 1 or min(ranks) < 1:
            raise ValueError(f"need {n - 1} positive ranks")
    dims = X.shape
    edge_budget = None if tol is None else tol * tol * float(np.sum(X * X)) / (n - 1)

    cores, tails, clipped = [], np.zeros(n - 1), []
    r_prev = 1
    C = X.reshape(dims[0], -1, order="F")
    for e in range(n - 1):
        U, s, V = dense_svd(C)
        full = len(s)
        # tail[j] = energy discarded when keeping j singular values
        tail = np.concatenate([np.cumsum((s * s)[::-1])[::-1], [0.0]])
        if ranks is not None:
            chi = ranks[e]
            if chi > full:
                clipped.append(e)
                warnings.warn(f"edge {e}: rank {chi} clipped to {full}", stacklevel=2)
                chi = full
        elif edge_budget is not None:
            chi = max(1, int(np.argmax(tail <= edge_budget)))
        else:
            chi = full
        tails[e] = tail[chi]
        cores.append(U[:, :chi].reshape(r_prev, dims[e], chi, order="F"))
        W = s[:chi, None] * V[:, :chi].T
        r_prev = chi
        C = W.reshape(chi * dims[e + 1], -1, order="F")
    cores.append(C.reshape(r_prev, dims[-1], 1, order="F"))
    return TTSVDResult(TTCores(cores), tails, clipped)


def tt_reconstruct(tt) -> np.ndarray:
    cores = tt.cores if hasattr(tt, "cores") else list(tt)
    TTCores(list(cores))
    M = cores[0].reshape(cores[0].shape[1], -1, order="F")
    for G in cores[1:]:
        r, d, r2 = G.shape
        M = (M @ G.reshape(r, d * r2, order="F")).reshape(-1, r2, order="F")
    return M.reshape(tuple(G.shape[1] for G in cores), order="F")


def left_orthogonality_defect(G) -> float:
    """``||U^T U - I||_2`` for the ``(chi_{k-1} d_k) x chi_k`` unfolding ``U`` of a core."""
    U = G.reshape(-1, G.shape[2], order="F")
    return float(np.linalg.norm(U.T @ U - np.eye(U.shape[1]), 2))


def unfolding_tails(X, ranks) -> np.ndarray:
    """Per-edge best rank-``chi_e`` error of ``matricize(X, e + 1)`` (squared)."""
    X = np.asarray(X, dtype=float)
    out = np.empty(X.ndim - 1)
    for e in range(X.ndim - 1):
        s = dense_svd(matricize(X, e + 1)).singular_values
        out[e] = float(np.sum(s[ranks[e]:] ** 2))
    return out


# --- quasi-optimality probe -----------------------------------------------


def _interfaces(cores, k):
    """Left interface ``(prod d_<k, chi_{k-1})`` and right ``(chi_k, prod d_>k)``."""
    L = np.ones((1, 1))
    for G in cores[:k]:
        r, d, r2 = G.shape
        L = (L @ G.reshape(r, d * r2, order="F")).reshape(-1, r2, order="F")
    R = np.ones((1, 1))
    for G in reversed(cores[k + 1:]):
        r, d, r2 = G.shape
        R = (G.reshape(r * d, r2, order="F") @ R).reshape(r, -1, order="F")
    return L, R


def tt_als(X, ranks, sweeps=25, rtol=1e-10, init=None, rng=None) -> TTCores:
    """Alternating least squares over TT cores with fixed ranks.

    Each update solves for one core with all others fixed; forward and
    backward half-sweeps alternate. Stops after ``sweeps`` full sweeps or when
    the relative change in the error falls below ``rtol``. The initial cores
    are ``init`` or random orthogonal matrices drawn from ``rng``.
    """
    X = np.asarray(X, dtype=float)
    n, dims = X.ndim, X.shape
    chain = [1, *ranks, 1]
    if init is None:
        rng = rng if rng is not None else np.random.default_rng(0)
        cores = []
        for k in range(n):
            a, b = chain[k] * dims[k], chain[k + 1]
            Q = np.linalg.qr(rng.standard_normal((max(a, b), min(a, b))))[0]
            M = Q if a >= b else Q.T
            cores.append(M.reshape(chain[k], dims[k], chain[k + 1], order="F"))
    else:
        cores = [G.copy() for G in init]
    nx = np.linalg.norm(X)
    prev = np.inf
    order = list(range(n)) + list(range(n - 2, 0, -1))
    for _ in range(sweeps):
        for k in order:
            L, R = _interfaces(cores, k)
            T = X.reshape(L.shape[0], dims[k], R.shape[1], order="F")
            Lp, Rp = np.linalg.pinv(L), np.linalg.pinv(R)
            cores[k] = np.einsum("ap,pdq,qb->adb", Lp, T, Rp)
        err = np.linalg.norm(X - tt_reconstruct(cores))
        if abs(prev - err) <= rtol * max(nx, np.finfo(float).tiny):
            break
        prev = err
    return TTCores(cores)


@dataclass(frozen=True)
class QuasiOptProbe:
    """Squared-error ratios against the per-edge lower bound.

    ``lower = max_e tail_e`` bounds ``||X - Y||_F^2`` from below for every TT
    tensor ``Y`` with the given ranks. ``ratio_svd`` uses the TT-SVD error and
    lies in ``[1, m - 1]``; ``ratio_best`` is the smallest ratio found over
    TT-SVD and the ALS refinements. A ratio whose numerator and denominator
    both vanish is 1.
    """

    m: int
    ranks: tuple
    err_svd: float
    err_best: float
    lower: float
    tails: np.ndarray
    ratio_svd: float
    ratio_best: float


def _ratio(err, lower, scale):
    floor = (1e-13 * scale) ** 2
    if lower <= floor:
        return 1.0 if err <= floor else np.inf
    return max(err / lower, 1.0) if err >= lower * (1 - 1e-12) else err / lower


def tt_quasi_opt_probe(X, ranks, trials=1, seed=0, sweeps=25, rtol=1e-10) -> QuasiOptProbe:
    """Compare TT-SVD against the edge lower bound and ALS refinements.

    ALS runs once from the TT-SVD cores and ``trials`` times from random
    orthogonal starts (stream ``(seed, t, SEARCH)``).
    """
    X = np.asarray(X, dtype=float)
    ranks = [int(ranks)] * (X.ndim - 1) if np.isscalar(ranks) else list(ranks)
    res = tt_svd(X, ranks)
    ranks = list(res.ranks)
    err_svd = float(np.sum((X - tt_reconstruct(res.tt)) ** 2))
    lower_tails = unfolding_tails(X, ranks)
    lower = float(lower_tails.max())
    best = err_svd
    starts = [dict(init=res.cores)] + [dict(rng=_rng.stream(seed, t, _rng.SEARCH)) for t in range(trials)]
    for kw in starts:
        tt = tt_als(X, ranks, sweeps=sweeps, rtol=rtol, **kw)
        best = min(best, float(np.sum((X - tt_reconstruct(tt)) ** 2)))
    scale = np.linalg.norm(X)
    return QuasiOptProbe(
        X.ndim, tuple(ranks), err_svd, best, lower, lower_tails,
        _ratio(err_svd, lower, scale), _ratio(best, lower, scale),
    )


def near_tie_tensor(dims, eps=1e-3, terms=None, seed=0) -> np.ndarray:
    """Sum of random rank-1 terms with weights ``1, 1 - eps, 1 - 2 eps, ...``.

    Nearly tied weights make the rank cut at each edge ambiguous, which is
    where sequential truncation is most likely to lose against the optimum.
    """
    rng = _rng.stream(seed, _rng.MATRIX)
    terms = terms or min(dims)
    X = np.zeros(dims)
    for j in range(terms):
        vs = [rng.standard_normal(d) for d in dims]
        vs = [v / np.linalg.norm(v) for v in vs]
        T = vs[0]
        for v in vs[1:]:
            T = np.multiply.outer(T, v)
        X += (1 - j * eps) * T
    return X


# --- I/O ------------------------------------------------------------------


def write_tensor_csv(target, X) -> None:
    """First line ``dims,d_1,...,d_n``; then one value per line, first index fastest."""
    X = np.asarray(X, dtype=float)
    f, close = _open(target, "w")
    try:
        f.write("dims," + ",".join(str(d) for d in X.shape) + "\n")
        for v in X.ravel(order="F"):
            f.write(_fmt(v) + "\n")
    finally:
        if close:
            f.close()


def read_tensor_csv(source) -> np.ndarray:
    f, close = _open(source, "r")
    try:
        lines = [ln.strip() for ln in f.read().splitlines()]
    finally:
        if close:
            f.close()
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    head = lines[0].split(",")
    if head[0] != "dims":
        raise ValueError("missing dims header")
    dims = tuple(int(d) for d in head[1:])
    vals = np.array([float(v) for v in lines[1:]])
    if len(vals) != math.prod(dims):
        raise ValueError(f"expected {math.prod(dims)} values, found {len(vals)}")
    return vals.reshape(dims, order="F")
