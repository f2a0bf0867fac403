"""Embedding and injection measurements, scans and test subspaces."""

import csv
import os
from dataclasses import dataclass

import numpy as np

from .. import _rng
from ..core_la import dense_svd, householder_qr
from .operators import SketchOperator, apply_sketch, make_sketch


@dataclass(frozen=True)
class EmbeddingReport:
    """``alpha = sigma_min(Omega^T Q)^2`` and ``beta = sigma_max(Omega^T Q)^2``.

    With ``k < r`` the sketched basis has a nontrivial kernel and ``alpha = 0``.
    """

    alpha: float
    beta: float
    r: int
    family: str
    k: int
    zeta: int = None
    seed: int = None


def check_orthonormal(Q, tol=1e-10):
    Q = np.asarray(Q)
    r = Q.shape[1]
    if np.abs(Q.conj().T @ Q - np.eye(r)).max() > tol:
        raise ValueError("basis is not orthonormal")


def measure_embedding(op: SketchOperator, Q, tol=1e-10) -> EmbeddingReport:
    """Injectivity and dilation of ``op`` on the subspace spanned by ``Q``."""
    check_orthonormal(Q, tol)
    r = Q.shape[1]
    s = dense_svd(apply_sketch(op, Q)).singular_values
    beta = float(s[0] ** 2) if len(s) else 0.0
    alpha = float(s[-1] ** 2) if len(s) == r else 0.0
    return EmbeddingReport(alpha, beta, r, op.family, op.k, op.zeta, op.seed)


# --- subspaces --------------------------------------------------------------


def haar_subspace(rng, n, r) -> np.ndarray:
    """Orthonormal basis of a uniformly random ``r``-dimensional subspace."""
    Q = householder_qr(rng.standard_normal((n, r))).Q
    return Q


def coordinate_subspace(n, idx) -> np.ndarray:
    """Basis ``I[:, idx]``."""
    Q = np.zeros((n, len(idx)))
    Q[np.asarray(idx), np.arange(len(idx))] = 1.0
    return Q


def srht_hard_subspace(r) -> np.ndarray:
    """First ``r`` coordinates in ``R^(r^2)``.

    Under a Sylvester-ordered Hadamard transform the rows of the transformed
    basis repeat with period ``r``, so an SRHT is injective only if its ``k``
    samples hit all ``r`` residues mod ``r``: a coupon-collector event that
    needs ``k`` of order ``r log r``. ``r`` must be a power of two.
    """
    if r < 1 or r & (r - 1):
        raise ValueError("r must be a power of 2")
    return coordinate_subspace(r * r, np.arange(r))


FIXTURES = {
    "haar": lambda n, r, seed=0: haar_subspace(_rng.stream(seed, _rng.SUBSPACE), n, r),
    "coordinate": lambda n, r, seed=0: coordinate_subspace(n, np.arange(r)),
    "srht_hard": lambda n, r, seed=0: srht_hard_subspace(r),
}


def subspace_fixture(name, n, r, seed=0) -> np.ndarray:
    """Named test subspace: ``haar``, ``coordinate`` or ``srht_hard`` (ignores ``n``)."""
    if name not in FIXTURES:
        raise ValueError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    return FIXTURES[name](n, r, seed)


# --- scans ------------------------------------------------------------------

SCAN_COLUMNS = ("family", "n", "r", "k", "zeta", "threshold", "trials", "failures")


@dataclass(frozen=True)
class ScanRow:
    family: str
    n: int
    r: int
    k: int
    zeta: int
    threshold: float
    trials: int
    failures: int

    @property
    def failure_rate(self):
        return self.failures / self.trials if self.trials else 0.0

    def passes(self, delta=0.01):
        """Empirical OSI check: failure fraction at most ``delta``."""
        return self.failure_rate <= delta


def osi_scan(family, n, r, k_grid, zeta_grid=(None,), threshold=0.1, trials=100, seed=0,
             subspace="haar") -> list:
    """Count trials with ``alpha < threshold`` for every ``(k, zeta)`` pair.

    Trial ``t`` draws its subspace from stream ``(seed, t, SUBSPACE)`` and
    reuses it for every grid point; the sketch for grid point ``(k, zeta)``
    uses keys ``(t, k, zeta)``. ``zeta`` is recorded as 0 for families
    without a sparsity parameter.
    """
    rows = []
    sparse = str(family).lower() == "sparsestack"
    grid = [(int(k), (int(z) if sparse else 0)) for k in k_grid for z in (zeta_grid if sparse else (None,))]
    fails = dict.fromkeys(grid, 0)
    for t in range(trials):
        if subspace == "haar":
            Q = haar_subspace(_rng.stream(seed, t, _rng.SUBSPACE), n, r)
        else:
            Q = subspace_fixture(subspace, n, r, seed)
        for k, z in grid:
            op = make_sketch(family, n, k, zeta=z or None, seed=seed, keys=(t, k, z))
            if measure_embedding(op, Q).alpha < threshold:
                fails[(k, z)] += 1
    for k, z in grid:
        rows.append(ScanRow(str(family).lower(), int(n), int(r), k, z, float(threshold), int(trials), fails[(k, z)]))
    return rows


def write_scan_csv(target, rows) -> None:
    own = isinstance(target, (str, os.PathLike))
    fh = open(target, "w", newline="") if own else target
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SCAN_COLUMNS)
        for row in rows:
            w.writerow([row.family, row.n, row.r, row.k, row.zeta, repr(row.threshold), row.trials, row.failures])
    finally:
        if own:
            fh.close()
