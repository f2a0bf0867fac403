"""Nystrom errors, diminishing-returns checks and the volume-sampling objective."""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .. import _rng
from .._errors import RankDeficientError
from ..core_la import dense_svd


def nystrom_error(K, I, norm="nuclear") -> float:
    """Norm of ``K - K[:, I] K[I, I]^{-1} K[I, :]`` for psd ``K``.

    The nuclear norm of the psd residual is its trace; the spectral norm
    comes from the SVD. A singular ``K[I, I]`` raises :class:`RankDeficientError`.
    """
    K = np.asarray(K, dtype=float)
    I = list(I)
    if I:
        KII = K[np.ix_(I, I)]
        s = dense_svd(KII).singular_values
        if s[-1] <= 1e-14 * max(s[0], np.finfo(float).tiny) * len(I):
            raise RankDeficientError("principal submatrix K[I, I] is singular")
        R = K - K[:, I] @ np.linalg.solve(KII, K[I, :])
    else:
        R = K
    if norm == "nuclear":
        return float(np.trace(R))
    if norm == "spectral":
        return float(dense_svd(R).singular_values[0])
    raise ValueError(f"unknown norm {norm!r}")


def path_laplacian(n) -> np.ndarray:
    L = np.diag(np.r_[1.0, 2.0 * np.ones(n - 2), 1.0]) if n > 1 else np.zeros((1, 1))
    L -= np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    return L


@dataclass(frozen=True)
class SubmodularityReport:
    """Outcome of an exhaustive diminishing-returns check.

    ``worst`` is the largest violation ``gain(I') - gain(I)`` found, where
    ``gain(S) = F(S) - F(S + a)`` is the error reduction from adding ``a``.
    """

    pairs: int
    violations: int
    worst: float

    @property
    def passed(self):
        return self.violations == 0


def diminishing_returns_check(K, exclude_empty=True, rtol=1e-10) -> SubmodularityReport:
    """Check ``F(I) - F(I + a) >= F(I') - F(I' + a)`` for all ``I ⊆ I'``, ``a ∉ I'``.

    ``F`` is the nuclear Nystrom error. Adding an index to a larger set may
    never reduce the error more than adding it to a smaller one. With
    ``exclude_empty`` the pairs with ``I = {}`` are skipped. ``K`` must be
    positive definite so every principal submatrix is invertible.
    """
    K = np.asarray(K, dtype=float)
    n = K.shape[0]
    F = {}
    for mask in range(1 << n):
        F[mask] = nystrom_error(K, [i for i in range(n) if mask >> i & 1])
    tol = rtol * abs(F[0])
    pairs = violations = 0
    worst = -np.inf
    for a in range(n):
        rest = [i for i in range(n) if i != a]
        for big in range(1 << len(rest)):
            Ip = sum(1 << rest[i] for i in range(len(rest)) if big >> i & 1)
            gain_big = F[Ip] - F[Ip | 1 << a]
            sub = Ip
            while True:
                if sub or not exclude_empty:
                    pairs += 1
                    d = gain_big - (F[sub] - F[sub | 1 << a])
                    worst = max(worst, d)
                    if d > tol:
                        violations += 1
                if sub == 0:
                    break
                sub = (sub - 1) & Ip
    return SubmodularityReport(pairs, violations, float(worst))


def elementary_symmetric(lam, kmax=None) -> list:
    """``[e_0, ..., e_kmax]`` from the coefficients of ``prod (x + lam_i)``.

    ``kmax`` defaults to ``n``; higher coefficients are never formed.
    """
    kmax = len(lam) if kmax is None else kmax
    e = [lam[0] * 0 + 1] if len(lam) else [1]
    for x in lam:
        grown = [e[0]] + [e[j] + x * e[j - 1] for j in range(1, len(e))]
        if len(e) <= kmax:
            grown.append(x * e[-1])
        e = grown
    return e


def volume_objective(lam, k):
    """``y_k = (k + 1) e_{k+1}(lam) / e_k(lam)``.

    Integer or ``Fraction`` inputs are evaluated exactly and return a
    ``Fraction``. Floats are rescaled by ``max(lam)`` first (``y_k`` is
    homogeneous of degree one) so the symmetric polynomials cannot overflow.
    """
    lam = list(lam)
    n = len(lam)
    if not 0 <= k < n:
        raise ValueError("need 0 <= k < n")
    if any(x <= 0 for x in lam):
        raise ValueError("eigenvalues must be positive")
    if all(isinstance(x, Rational) for x in lam):
        e = elementary_symmetric([Fraction(x) for x in lam], k + 1)
        return (k + 1) * e[k + 1] / e[k]
    c = max(float(x) for x in lam)
    e = elementary_symmetric([float(x) / c for x in lam], k + 1)
    return c * ((k + 1) * e[k + 1] / e[k])


# --- worst-case trace CSSP --------------------------------------------------


def best_trace_subset(K, k):
    """``min`` over ``|I| = k`` of the nuclear Nystrom error, by enumeration."""
    best, bestI = np.inf, None
    for I in itertools.combinations(range(K.shape[0]), k):
        v = nystrom_error(K, I)
        if v < best:
            best, bestI = v, I
    return best, bestI


def schur_horn_equal_diagonal(mu, tol=1e-12) -> np.ndarray:
    """Orthogonal ``V`` such that ``V^T diag(mu) V`` has a constant diagonal.

    Repeatedly takes the largest and smallest diagonal entries and applies
    the plane rotation that sets one of them to the mean; each rotation
    fixes one entry, so at most ``n - 1`` rotations are needed.
    """
    mu = np.asarray(mu, dtype=float)
    n = len(mu)
    M = np.diag(mu)
    V = np.eye(n)
    target = mu.mean()
    fixed = np.zeros(n, bool)
    scale = max(np.abs(mu).max(), np.finfo(float).tiny)
    for _ in range(4 * n):
        d = np.diag(M)
        if np.ptp(d) <= tol * scale:
            break
        free = np.flatnonzero(~fixed)
        i = free[np.argmax(d[free])]
        j = free[np.argmin(d[free])]
        a, b, c = M[i, i], M[i, j], M[j, j]
        mid, half = (a + c) / 2, (a - c) / 2
        R = np.hypot(half, b)
        phi = np.arctan2(b, half)
        theta = (phi + np.arccos(np.clip((target - mid) / R, -1, 1))) / 2
        G = np.eye(n)
        cs, sn = np.cos(theta), np.sin(theta)
        G[i, i], G[i, j], G[j, i], G[j, j] = cs, -sn, sn, cs
        M = G.T @ M @ G
        M = (M + M.T) / 2
        V = V @ G
        fixed[i] = True
    return V


@dataclass(frozen=True)
class TraceGap:
    """``x_hat`` is a lower bound on the worst-case optimal trace error ``x_k``;
    ``y`` is the volume-sampling objective ``y_k`` (an upper bound on ``x_k``)."""

    x_hat: float
    y: float
    V: np.ndarray
    trials: int

    @property
    def gap(self):
        return self.y - self.x_hat


def trace_cssp_worst_vs_volume(lam, k, trials=1000, seed=0, local_steps=200) -> TraceGap:
    """Randomized search for orthogonal ``V`` maximizing the best trace error.

    Each trial evaluates ``min_I tr(K - K_{:I} K_{II}^{-1} K_{I:})`` for
    ``K = V^T diag(lam) V`` with Haar ``V``; the best ``V`` found is then
    refined by random plane rotations that are kept only when they help.
    The Schur-Horn equal-diagonal ``V`` for ``diag(1/lam)`` is always
    included, which attains ``y_{n-1}`` exactly when ``k = n - 1``.
    """
    lam = np.asarray(lam, dtype=float)
    n = len(lam)
    if n > 8:
        raise ValueError("exhaustive inner minimization limited to n <= 8")
    D = np.diag(lam)

    def value(V):
        return best_trace_subset(V.T @ D @ V, k)[0]

    V_best = schur_horn_equal_diagonal(1 / lam)
    best = value(V_best)
    for t in range(trials):
        rng = _rng.stream(seed, t, _rng.SEARCH)
        Z = rng.standard_normal((n, n))
        Q, Rr = np.linalg.qr(Z)
        V = Q * np.sign(np.diag(Rr))
        v = value(V)
        if v > best:
            best, V_best = v, V
    rng = _rng.stream(seed, trials, _rng.SEARCH)
    step = 0.3
    for _ in range(local_steps):
        i, j = rng.choice(n, 2, replace=False)
        th = rng.normal(scale=step)
        G = np.eye(n)
        G[i, i] = G[j, j] = np.cos(th)
        G[i, j], G[j, i] = -np.sin(th), np.sin(th)
        V = V_best @ G
        v = value(V)
        if v > best:
            best, V_best = v, V
        else:
            step = max(step * 0.98, 1e-3)
    return TraceGap(float(best), float(volume_objective(list(lam), k)), V_best, trials)
