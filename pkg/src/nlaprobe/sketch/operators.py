"""Random sketching matrices and their fast application.

A sketch ``Omega`` is an ``n x k`` matrix; applying it to ``X`` (``n`` rows)
returns ``Omega^T X`` (``k`` rows). Families:

``gaussian``
    iid N(0, 1/k) entries.
``sparsestack``
    ``k = b zeta``; row ``i`` holds one entry ``+-1/sqrt(zeta)`` in each of
    the ``zeta`` column blocks ``[j b, (j+1) b)``, at a uniform position.
``srht``
    ``sqrt(n/k) D F S`` with Rademacher diagonal ``D``, orthonormal
    Walsh-Hadamard ``F`` (entries ``+-1/sqrt(n)``) and coordinate sampler ``S``.
``rerand_srht``
    ``sqrt(n/k) D1 F D2 F S``.
``identity``
    ``k = n`` and ``Omega = I``.
``select``
    unscaled coordinate selection ``I[:, idx]``, built by :func:`coordinate_sketch`.

Every family satisfies ``E ||Omega^T x||^2 = ||x||^2`` except ``select``.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .. import _rng
from ..core_la import as_csr

FAMILIES = ("gaussian", "sparsestack", "srht", "rerand_srht", "identity", "select")
_ALIASES = {"sparse_stack": "sparsestack", "rerandsrht": "rerand_srht", "rerandomized_srht": "rerand_srht"}


def _is_pow2(n):
    return n >= 1 and (n & (n - 1)) == 0


def fwht(x, axis=0):
    """Orthonormal fast Walsh-Hadamard transform along ``axis``.

    Sylvester (natural) ordering, scaled by ``1/sqrt(n)`` so the transform is
    orthogonal and its own inverse. ``n`` must be a power of two.
    """
    y = np.moveaxis(np.array(x, dtype=np.result_type(np.asarray(x).dtype, float)), axis, 0)
    n = y.shape[0]
    if not _is_pow2(n):
        raise ValueError(f"length {n} is not a power of 2")
    rest = y.shape[1:]
    h = 1
    while h < n:
        y = y.reshape(n // (2 * h), 2, h, *rest)
        a, b = y[:, 0], y[:, 1]
        y = np.stack((a + b, a - b), axis=1)
        h *= 2
    y = y.reshape(n, *rest) / np.sqrt(n)
    return np.moveaxis(y, 0, axis)


@dataclass
class SketchOperator:
    """A realized sketch.

    Only the fields relevant to ``family`` are set: ``dense`` (gaussian),
    ``csr`` (sparsestack, stored as the ``n x k`` matrix), ``signs`` /
    ``signs2`` / ``rows`` (SRHT families, ``rows`` are the sampled
    coordinates), ``rows`` alone for ``select``.
    """

    family: str
    n: int
    k: int
    zeta: int = None
    seed: int = None
    dense: np.ndarray = None
    csr: sp.csr_matrix = None
    signs: np.ndarray = None
    signs2: np.ndarray = None
    rows: np.ndarray = None
    replace: bool = True
    keys: tuple = field(default=())

    @property
    def b(self):
        return self.k // self.zeta if self.family == "sparsestack" else None

    def apply(self, X):
        return apply_sketch(self, X)

    def to_dense(self) -> np.ndarray:
        """Explicit ``n x k`` matrix, built without the fast transform."""
        n, k = self.n, self.k
        if self.family == "gaussian":
            return self.dense.copy()
        if self.family == "sparsestack":
            return self.csr.toarray()
        if self.family == "identity":
            return np.eye(n)
        S = np.zeros((n, k))
        S[self.rows, np.arange(k)] = 1.0
        if self.family == "select":
            return S
        F = sla.hadamard(n) / np.sqrt(n)
        if self.family == "srht":
            return np.sqrt(n / k) * (self.signs[:, None] * F) @ S
        return np.sqrt(n / k) * (self.signs[:, None] * F) @ (self.signs2[:, None] * F) @ S


def _family(name):
    f = str(name).lower()
    f = _ALIASES.get(f, f)
    if f not in FAMILIES:
        raise ValueError(f"unknown sketch family {name!r}")
    return f


def make_sketch(family, n, k, zeta=None, seed=0, keys=(), replace=True) -> SketchOperator:
    """Draw a sketch from stream ``(seed, SKETCH, *keys)``.

    ``zeta`` is required for ``sparsestack`` and must divide ``k``. SRHT
    families need ``n`` a power of two; ``replace`` selects sampling with
    (default) or without replacement.
    """
    f = _family(family)
    n, k = int(n), int(k)
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    rng = _rng.stream(seed, _rng.SKETCH, *keys)
    op = SketchOperator(f, n, k, seed=seed, keys=tuple(keys), replace=replace)
    if f == "gaussian":
        op.dense = rng.standard_normal((n, k)) / np.sqrt(k)
    elif f == "sparsestack":
        if zeta is None or zeta < 1 or k % zeta:
            raise ValueError(f"sparsestack needs k = b * zeta, got k={k}, zeta={zeta}")
        zeta = int(zeta)
        b = k // zeta
        s = rng.integers(0, b, size=(n, zeta))
        rho = 2.0 * rng.integers(0, 2, size=(n, zeta)) - 1.0
        cols = s + b * np.arange(zeta)
        rows = np.repeat(np.arange(n), zeta)
        op.zeta = zeta
        op.csr = as_csr(sp.csr_matrix((rho.ravel() / np.sqrt(zeta), (rows, cols.ravel())), shape=(n, k)))
    elif f in ("srht", "rerand_srht"):
        if not _is_pow2(n):
            raise ValueError(f"SRHT needs n a power of 2, got {n}")
        if not replace and k > n:
            raise ValueError("cannot sample k > n coordinates without replacement")
        op.signs = 2.0 * rng.integers(0, 2, size=n) - 1.0
        if f == "rerand_srht":
            op.signs2 = 2.0 * rng.integers(0, 2, size=n) - 1.0
        op.rows = rng.integers(0, n, size=k) if replace else rng.choice(n, size=k, replace=False)
    elif f == "identity":
        if k != n:
            raise ValueError("identity sketch needs k = n")
    else:
        raise ValueError("use coordinate_sketch for the select family")
    return op


def coordinate_sketch(n, idx) -> SketchOperator:
    """Unscaled coordinate selection ``Omega = I[:, idx]``."""
    idx = np.asarray(idx, dtype=int)
    if np.any(idx < 0) or np.any(idx >= n):
        raise ValueError("index out of range")
    return SketchOperator("select", int(n), len(idx), rows=idx)


def apply_sketch(op: SketchOperator, X) -> np.ndarray:
    """Return ``Omega^T X`` using the structure of the family."""
    X = np.asarray(X)
    vec = X.ndim == 1
    X2 = X[:, None] if vec else X
    if X2.shape[0] != op.n:
        raise ValueError(f"sketch expects {op.n} rows, got {X2.shape[0]}")
    f = op.family
    if f == "gaussian":
        Y = op.dense.T @ X2
    elif f == "sparsestack":
        Y = op.csr.T @ X2
    elif f == "identity":
        Y = X2.astype(np.result_type(X2.dtype, float), copy=True)
    elif f == "select":
        Y = X2[op.rows].astype(np.result_type(X2.dtype, float))
    else:
        Z = fwht(op.signs[:, None] * X2)
        if f == "rerand_srht":
            Z = fwht(op.signs2[:, None] * Z)
        Y = np.sqrt(op.n / op.k) * Z[op.rows]
    return Y[:, 0] if vec else np.asarray(Y)
