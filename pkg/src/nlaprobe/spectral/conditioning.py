"""Eigenvalue condition numbers, pseudospectral shattering and Minami gaps."""

from dataclasses import dataclass

import numpy as np

from .. import _rng
from ..core_la import dense_eig, dense_svd


@dataclass(frozen=True)
class EigCondition:
    """``kappa_V = ||V|| ||V^-1||`` for unit-norm eigenvectors, ``gap`` the
    minimum eigenvalue distance, ``kappa_eig = kappa_V / gap``.

    ``flagged`` marks numerically multiple eigenvalues or a singular
    eigenvector matrix, in which case ``kappa_eig`` is infinite.
    """

    kappa_V: float
    gap: float
    kappa_eig: float
    flagged: bool
    eigenvalues: np.ndarray


def min_gap(w) -> float:
    """``min_{i != j} |w_i - w_j|`` (``inf`` for a single eigenvalue)."""
    w = np.asarray(w)
    if len(w) < 2:
        return np.inf
    if np.isrealobj(w):
        return float(np.diff(np.sort(w)).min())
    D = np.abs(w[:, None] - w[None, :])
    D[np.diag_indices(len(w))] = np.inf
    return float(D.min())


def kappa_eig(A, gap_tol=1e-14) -> EigCondition:
    A = np.asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    w, V = dense_eig(A)
    s = dense_svd(V).singular_values
    kV = float(s[0] / s[-1]) if s[-1] > 0 else np.inf
    gap = min_gap(w)
    normA = dense_svd(A).singular_values[0] if n else 0.0
    flagged = gap <= gap_tol * max(normA, np.finfo(float).tiny) or not np.isfinite(kV)
    return EigCondition(kV, gap, np.inf if flagged else kV / gap, bool(flagged), w)


def ginibre(rng, n) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)


@dataclass(frozen=True)
class ShatteringResult:
    """Per-trial ``kappa_eig(A + E)`` and ``c_hat = log kappa_eig / log(n / delta)``."""

    n: int
    delta: float
    kappas: np.ndarray
    exponents: np.ndarray
    flagged: int

    def quantiles(self, q=(0.0, 0.25, 0.5, 0.75, 1.0)):
        return np.quantile(self.kappas, q)

    @property
    def median_exponent(self):
        return float(np.median(self.exponents))


def shattering_experiment(A, delta, trials=100, seed=0) -> ShatteringResult:
    """Perturb ``A`` by ``E = delta G / ||G||_2`` with complex Ginibre ``G``.

    Trial ``t`` uses stream ``(seed, t, PERTURB)``.
    """
    A = np.asarray(A)
    n = A.shape[0]
    kap = np.empty(trials)
    flagged = 0
    for t in range(trials):
        G = ginibre(_rng.stream(seed, t, _rng.PERTURB), n)
        E = delta * G / dense_svd(G).singular_values[0]
        c = kappa_eig(A + E)
        kap[t] = c.kappa_eig
        flagged += c.flagged
    with np.errstate(divide="ignore", invalid="ignore"):
        expo = np.log(kap) / np.log(n / delta) if delta > 0 else np.full(trials, np.inf)
    return ShatteringResult(n, float(delta), kap, expo, int(flagged))


# --- Minami ---------------------------------------------------------------


@dataclass(frozen=True)
class MinamiResult:
    """Per-trial ``gap(T + delta E)`` and ``c_hat = log gap / log(delta / n)``.

    ``c_hat`` is the exponent ``c`` with ``gap = (delta/n)^c`` (constant 1).
    """

    n: int
    delta: float
    dist: str
    gaps: np.ndarray
    exponents: np.ndarray

    @property
    def min(self):
        return float(self.gaps.min())

    @property
    def median(self):
        return float(np.median(self.gaps))


def toeplitz_tridiag(n, lo=-1.0, mid=2.0, hi=None) -> np.ndarray:
    hi = lo if hi is None else hi
    return np.diag(np.full(n, mid)) + np.diag(np.full(n - 1, lo), -1) + np.diag(np.full(n - 1, hi), 1)


def minami_gap_experiment(T, delta, dist="uniform", trials=1000, seed=0) -> MinamiResult:
    """Minimum eigenvalue gap of ``T + delta diag(e)`` with iid ``e``.

    ``dist="uniform"`` draws ``e_i ~ U(-1, 1)``, ``"gaussian"`` draws N(0, 1).
    Trial ``t`` uses stream ``(seed, t, PERTURB)``.
    """
    T = np.asarray(T, dtype=float)
    n = T.shape[0]
    if n < 2:
        raise ValueError("need n >= 2")
    if not np.array_equal(T, T.T) or np.any(np.triu(T, 2)) or np.any(np.tril(T, -2)):
        raise ValueError("T must be real symmetric tridiagonal")
    if dist not in ("uniform", "gaussian"):
        raise ValueError(f"unknown distribution {dist!r}")
    gaps = np.empty(trials)
    for t in range(trials):
        rng = _rng.stream(seed, t, _rng.PERTURB)
        e = rng.uniform(-1, 1, n) if dist == "uniform" else rng.standard_normal(n)
        w = dense_eig(T + delta * np.diag(e), symmetric=True).eigenvalues
        gaps[t] = min_gap(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        expo = np.log(gaps) / np.log(delta / n) if delta > 0 else np.full(trials, np.nan)
    return MinamiResult(n, float(delta), dist, gaps, expo)


def fit_exponent(x, y):
    """Least-squares fit of ``y = C x^c`` in log-log form; returns ``(c, C)``."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    c, logC = np.polyfit(lx, ly, 1)
    return float(c), float(np.exp(logC))


def write_histogram_csv(target, values, bins=20, log=False, label="value") -> None:
    """Write ``bin_lo,bin_hi,count`` rows for the finite ``values``.

    ``log=True`` bins ``log10`` of the values (for condition numbers and
    gaps); the bin edges are reported in the original scale.
    """
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if log:
        v = np.log10(v[v > 0])
    counts, edges = np.histogram(v, bins=bins) if len(v) else (np.zeros(0, int), np.zeros(1))
    if log:
        edges = 10.0**edges
    close = not hasattr(target, "write")
    f = open(target, "w", newline="\n") if close else target
    try:
        f.write(f"{label}_lo,{label}_hi,count\n")
        for lo, hi, c in zip(edges[:-1], edges[1:], counts):
            f.write(f"{lo!r},{hi!r},{int(c)}\n")
    finally:
        if close:
            f.close()
