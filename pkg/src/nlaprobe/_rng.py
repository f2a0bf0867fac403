"""Seed splitting.

Every random stream in the package is derived from a user seed plus a tuple
of non-negative integer keys (trial index, purpose tag, ...) through
``numpy.random.SeedSequence([seed, *keys])``. The stream for trial ``t`` thus
depends only on ``(seed, t)``, never on execution order, so trials can run in
any order or in parallel without changing results.
"""

import numpy as np

# purpose tags, kept stable so outputs stay reproducible across versions
MATRIX = 0
RHS = 1
SOLVER = 2
SKETCH = 3
SUBSPACE = 4
PERTURB = 5
SEARCH = 6


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Return the generator for ``(seed, *keys)``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a complex Ginibre matrix, with the columns of Q rescaled by the
    phases of diag(R) so the distribution is exactly Haar.
    """
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def complex_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform sample from the unit sphere of ``C^n``."""
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


class AliasTable:
    """Vose alias table for O(1) draws from a fixed discrete distribution."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or len(w) == 0 or np.any(w < 0) or not np.isfinite(w).all() or w.sum() <= 0:
            raise ValueError("weights must be a nonempty vector of nonnegative finite numbers")
        n = len(w)
        scaled = w * (n / w.sum())
        prob = np.ones(n)
        alias = np.arange(n)
        small = [i for i in range(n) if scaled[i] < 1.0]
        large = [i for i in range(n) if scaled[i] >= 1.0]
        while small and large:
            s, l = small.pop(), large.pop()
            prob[s] = scaled[s]
            alias[s] = l
            scaled[l] = (scaled[l] + scaled[s]) - 1.0
            (small if scaled[l] < 1.0 else large).append(l)
        # leftovers are 1 up to rounding
        self.prob = prob
        self.alias = alias
        self.n = n

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size) * self.n
        k = np.minimum(u.astype(np.int64), self.n - 1)
        return np.where(u - k < self.prob[k], k, self.alias[k])
