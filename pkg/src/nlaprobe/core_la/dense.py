"""Dense factorizations used as trusted oracles throughout the package.

The QR factorization is written out here because column pivoting must follow
an exact greedy rule with a deterministic tie-break. The SVD and
eigendecompositions call the LAPACK drivers that implement the classical
algorithms (``gesvd``: Golub-Kahan bidiagonalization plus implicit-shift QR;
``syev``: Householder tridiagonalization plus implicit QL/QR; ``geev``:
Hessenberg reduction plus shifted QR).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .._errors import ConvergenceError


@dataclass(frozen=True)
class QRResult:
    Q: np.ndarray  # m x p, orthonormal columns, p = min(m, n)
    R: np.ndarray  # p x n, upper triangular, nonnegative diagonal
    perm: np.ndarray  # A[:, perm] = Q @ R

    def __iter__(self):
        return iter((self.Q, self.R, self.perm))


@dataclass(frozen=True)
class SvdResult:
    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray

    def __iter__(self):
        return iter((self.U, self.singular_values, self.V))


@dataclass(frozen=True)
class EigResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def householder_qr(A, pivoting=False) -> QRResult:
    """Householder QR, optionally with greedy column pivoting.

    With ``pivoting=True`` step ``j`` moves the trailing column of largest
    remaining 2-norm into position ``j``. Norms are recomputed from the
    trailing block at every step (no downdating) so the choice is exactly
    greedy; ties go to the lowest column index.

    Returns ``Q`` (m x p), ``R`` (p x n) and ``perm`` with
    ``A[:, perm] == Q @ R`` up to roundoff. The diagonal of ``R`` is made
    real and nonnegative. Rank deficiency just leaves zero trailing rows.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] < 1:
        raise ValueError("householder_qr expects a 2-D array with at least one row")
    dtype = np.result_type(A.dtype, np.float64)
    R = np.array(A, dtype=dtype)
    m, n = R.shape
    p = min(m, n)
    perm = np.arange(n)
    reflectors = []
    for j in range(p):
        if pivoting:
            norms = np.einsum("ij,ij->j", R[j:, j:].conj(), R[j:, j:]).real
            q = j + int(np.argmax(norms))
            if q != j:
                R[:, [j, q]] = R[:, [q, j]]
                perm[[j, q]] = perm[[q, j]]
        x = R[j:, j]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            reflectors.append(None)
            continue
        alpha = np.hypot(abs(x[0]), tail)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        R[j:, j:] -= 2.0 * np.outer(v, v.conj() @ R[j:, j:])
        R[j + 1:, j] = 0.0
        reflectors.append(v)

    Q = np.eye(m, p, dtype=dtype)
    for j in reversed(range(p)):
        v = reflectors[j]
        if v is not None:
            Q[j:, :] -= 2.0 * np.outer(v, v.conj() @ Q[j:, :])

    R = np.triu(R[:p, :])
    d = np.diagonal(R).copy()
    phases = np.ones(p, dtype=dtype)
    nz = d != 0
    phases[nz] = d[nz] / np.abs(d[nz])
    Q = Q * phases
    R = phases.conj()[:, None] * R
    R[np.arange(p), np.arange(p)] = np.abs(d)
    return QRResult(Q, R, perm)


def dense_svd(A) -> SvdResult:
    """Thin SVD with singular values sorted nonincreasing.

    Raises :class:`ConvergenceError` if the bidiagonal QR iteration fails.
    """
    A = np.asarray(A)
    try:
        U, s, Vh = sla.svd(A, full_matrices=False, lapack_driver="gesvd")
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return SvdResult(U, s, Vh.conj().T)


def dense_eig(A, symmetric=False) -> EigResult:
    """Eigendecomposition with unit-norm eigenvectors.

    For ``symmetric=True`` (real symmetric or complex Hermitian input) the
    eigenvalues are real and ascending and the eigenvectors orthonormal.
    Otherwise eigenvalues are complex, in LAPACK order.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("dense_eig expects a square matrix")
    try:
        if symmetric:
            w, V = sla.eigh(A, driver="ev")
        else:
            w, V = sla.eig(A)
            V = V / np.linalg.norm(V, axis=0)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc
    return EigResult(w, V)


def spectral_norm(A) -> float:
    """Largest singular value (0 for an empty matrix)."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(dense_svd(A).singular_values[0])
