"""Two-grid iteration matrix on model Poisson problems."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..core_la import as_csr, spectral_norm
from ..pde_bench import Grid2D, gen_diffusion_2d, laplacian_1d


@dataclass(frozen=True)
class TwoGridSetup:
    """Fine operator, transfer operators and smoother for one two-grid cycle.

    ``smoother`` is ``"jacobi"`` (weighted by ``omega``) or ``"gauss-seidel"``
    (forward). ``R = P^T`` and ``A_H = R A P`` (Galerkin).
    """

    A: sp.csr_matrix
    P: sp.csr_matrix
    R: sp.csr_matrix
    A_H: sp.csr_matrix
    h: float
    smoother: str = "jacobi"
    omega: float = 2.0 / 3.0
    nu: int = 2


def _interp_1d(nc):
    """Linear interpolation from ``nc`` coarse to ``2 nc + 1`` fine points."""
    nf = 2 * nc + 1
    rows, cols, vals = [], [], []
    for j in range(nc):
        f = 2 * j + 1
        rows += [f - 1, f, f + 1]
        cols += [j, j, j]
        vals += [0.5, 1.0, 0.5]
    return as_csr(sp.coo_matrix((vals, (rows, cols)), shape=(nf, nc)))


def galerkin_setup(A, P, h, smoother="jacobi", omega=2.0 / 3.0, nu=2) -> TwoGridSetup:
    A, P = as_csr(A), as_csr(P)
    R = as_csr(P.T)
    return TwoGridSetup(A, P, R, as_csr(R @ A @ P), h, smoother, omega, nu)


def poisson_1d_setup(nc: int, smoother="jacobi", omega=2.0 / 3.0, nu=2) -> TwoGridSetup:
    """1D Poisson on ``n = 2 nc + 1`` interior points, ``h = 1/(n+1)``."""
    n = 2 * nc + 1
    h = 1.0 / (n + 1)
    return galerkin_setup(laplacian_1d(n, h), _interp_1d(nc), h, smoother, omega, nu)


def poisson_2d_setup(nc: int, smoother="jacobi", omega=0.8, nu=2) -> TwoGridSetup:
    """5-point Poisson on an ``n x n`` grid, ``n = 2 nc + 1``, bilinear transfer."""
    n = 2 * nc + 1
    h = 1.0 / (n + 1)
    P1 = _interp_1d(nc)
    A = gen_diffusion_2d(Grid2D(n, n, h), 1.0)
    return galerkin_setup(A, sp.kron(P1, P1), h, smoother, omega, nu)


def smoother_matrix(setup: TwoGridSetup) -> np.ndarray:
    A = setup.A.toarray()
    n = A.shape[0]
    if setup.smoother == "jacobi":
        return np.eye(n) - setup.omega * (A / np.diag(A)[:, None])
    if setup.smoother == "gauss-seidel":
        return np.eye(n) - np.linalg.solve(np.tril(A), A)
    raise ValueError(f"unknown smoother {setup.smoother!r}")


@dataclass(frozen=True)
class TwoGridReport:
    """``norm_Q = ||Q||_2`` with ``Q = (A^-1 - P A_H^-1 R)(A S^nu)``.

    ``smoothing = ||A S^nu||_2 h^2`` and ``approximation =
    ||A^-1 - P A_H^-1 R||_2 / h^2`` are the measured counterparts of the
    smoothing and approximation constants; ``galerkin_residual`` is
    ``||A_H - R A P|| / ||A_H||`` (Frobenius).
    """

    norm_Q: float
    smoothing: float
    approximation: float
    galerkin_residual: float
    h: float


def two_grid_contraction(setup: TwoGridSetup) -> TwoGridReport:
    """Form the two-grid iteration matrix densely and measure it."""
    A = setup.A.toarray()
    AH = setup.A_H.toarray()
    P = setup.P.toarray()
    R = setup.R.toarray()
    if np.linalg.matrix_rank(AH) < AH.shape[0]:
        raise np.linalg.LinAlgError("coarse operator A_H is singular")
    S = np.linalg.matrix_power(smoother_matrix(setup), setup.nu)
    C = np.linalg.inv(A) - P @ np.linalg.solve(AH, R)
    AS = A @ S
    Q = C @ AS
    gal = np.linalg.norm(AH - R @ A @ P) / np.linalg.norm(AH)
    h2 = setup.h ** 2
    return TwoGridReport(spectral_norm(Q), spectral_norm(AS) * h2, spectral_norm(C) / h2, float(gal), setup.h)
