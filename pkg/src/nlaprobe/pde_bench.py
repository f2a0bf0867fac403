"""Finite-difference benchmark matrices and algebraic matrix classification.

Grids carry ``nx * ny`` interior points; the unknown at interior point
``(i, j)`` (``0 <= i < nx`` along x, ``0 <= j < ny`` along y) sits at
position ``((i + 1) h, (j + 1) h)`` and has row index ``j * nx + i``
(row-major lexicographic, x fastest). Boundaries carry zero Dirichlet data,
so couplings to boundary nodes are dropped from the matrix but still count
towards the diagonal.

All operators are scaled by ``1/h**2`` (diffusion) and ``1/h`` (convection);
with ``h = 1`` they reduce to the textbook stencils.
"""

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
import scipy.sparse as sp

from .core_la import as_csr


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    h: float = 1.0

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs at least one interior point per direction")
        if not self.h > 0:
            raise ValueError("mesh spacing must be positive")

    @property
    def n(self) -> int:
        return self.nx * self.ny

    def index(self, i, j):
        return j * self.nx + i


Field = Union[float, tuple, Callable]


def _pair_field(f) -> Callable:
    """Normalize a coefficient argument to ``(x, y) -> (fx, fy)``.

    Accepts a scalar, an ``(fx, fy)`` pair, or a callable returning either.
    """
    if callable(f):
        def ev(x, y):
            v = f(x, y)
            return (v, v) if np.isscalar(v) else (v[0], v[1])
        return ev
    if np.isscalar(f):
        return lambda x, y: (f, f)
    fx, fy = f
    return lambda x, y: (fx, fy)


def _diffusion_weights(grid: Grid2D, a):
    """Edge conductances ``(west, east, south, north)`` per interior node.

    Each edge coefficient is the arithmetic mean of the two adjacent node
    values; boundary nodes are evaluated at their boundary position.
    """
    af = _pair_field(a)
    nx, ny, h = grid.nx, grid.ny, grid.h
    # node values on the full (nx+2) x (ny+2) grid, boundary included
    ax = np.empty((ny + 2, nx + 2))
    ay = np.empty((ny + 2, nx + 2))
    for jj in range(ny + 2):
        for ii in range(nx + 2):
            vx, vy = af(ii * h, jj * h)
            ax[jj, ii], ay[jj, ii] = float(vx), float(vy)
    if np.any(ax < 0) or np.any(ay < 0) or not (np.all(np.isfinite(ax)) and np.all(np.isfinite(ay))):
        raise ValueError("diffusion coefficients must be finite and nonnegative")
    c = ax[1:-1, 1:-1]
    west = (c + ax[1:-1, :-2]) / 2
    east = (c + ax[1:-1, 2:]) / 2
    cy = ay[1:-1, 1:-1]
    south = (cy + ay[:-2, 1:-1]) / 2
    north = (cy + ay[2:, 1:-1]) / 2
    s = 1.0 / (h * h)
    return west * s, east * s, south * s, north * s


def _assemble(grid: Grid2D, center, west, east, south, north) -> sp.csr_matrix:
    nx, ny = grid.nx, grid.ny
    rows, cols, vals = [], [], []
    for j in range(ny):
        for i in range(nx):
            r = grid.index(i, j)
            # stored column order: south, west, center, east, north
            if j > 0:
                rows.append(r), cols.append(r - nx), vals.append(south[j, i])
            if i > 0:
                rows.append(r), cols.append(r - 1), vals.append(west[j, i])
            rows.append(r), cols.append(r), vals.append(center[j, i])
            if i < nx - 1:
                rows.append(r), cols.append(r + 1), vals.append(east[j, i])
            if j < ny - 1:
                rows.append(r), cols.append(r + nx), vals.append(north[j, i])
    M = sp.coo_matrix((np.array(vals, dtype=float), (rows, cols)), shape=(grid.n, grid.n))
    return as_csr(M)


def _fsum_grid(*terms):
    out = np.empty(terms[0].shape)
    for idx in np.ndindex(out.shape):
        out[idx] = math.fsum(t[idx] for t in terms)
    return out


def gen_diffusion_2d(grid: Grid2D, a: Field = 1.0, bc: str = "dirichlet") -> sp.csr_matrix:
    """Five-point discretization of ``-div(a grad u)`` with zero Dirichlet data.

    ``a`` is a scalar, an ``(a_x, a_y)`` pair (diagonal tensor), or a callable
    of ``(x, y)`` returning either. Negative coefficients raise ``ValueError``.
    The result is symmetric.
    """
    if bc != "dirichlet":
        raise ValueError("only zero Dirichlet boundaries are supported")
    w, e, s, n = _diffusion_weights(grid, a)
    center = _fsum_grid(w, e, s, n)
    return _assemble(grid, center, -w, -e, -s, -n)


def gen_convdiff_2d(grid: Grid2D, a: Field = 1.0, b: Field = (0.0, 0.0), scheme: str = "centered") -> sp.csr_matrix:
    """Discretize ``-div(a grad u) + b . grad u`` with zero Dirichlet data.

    ``scheme="centered"`` uses centered first differences; ``"upwind"`` uses
    one-sided differences chosen per node and per component from the sign of
    ``b`` so the convection term adds to the diagonal. A zero component of
    ``b`` contributes nothing under either scheme.
    """
    if scheme not in ("centered", "upwind"):
        raise ValueError(f"unknown scheme {scheme!r}")
    w, e, s, n = _diffusion_weights(grid, a)
    bf = _pair_field(b)
    nx, ny, h = grid.nx, grid.ny, grid.h
    bx = np.empty((ny, nx))
    by = np.empty((ny, nx))
    for j in range(ny):
        for i in range(nx):
            vx, vy = bf((i + 1) * h, (j + 1) * h)
            bx[j, i], by[j, i] = float(vx), float(vy)
    bx /= h
    by /= h

    if scheme == "centered":
        center = _fsum_grid(w, e, s, n)
        west, east = -w - bx / 2, -e + bx / 2
        south, north = -s - by / 2, -n + by / 2
    else:
        px, mx = np.maximum(bx, 0.0), np.maximum(-bx, 0.0)
        py, my = np.maximum(by, 0.0), np.maximum(-by, 0.0)
        west, east = -w - px, -e - mx
        south, north = -s - py, -n - my
        # diagonal from the rounded neighbour entries keeps dominance exact
        center = _fsum_grid(-west, -east, -south, -north)
    return _assemble(grid, center, west, east, south, north)


def gen_helmholtz(A, k: float) -> sp.csr_matrix:
    """Return ``A - k**2 I``."""
    A = as_csr(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if k == 0:
        return A
    return as_csr(A - (k * k) * sp.identity(A.shape[0], format="csr"))


def shifted_laplacian_preconditioner(A, k: float, alpha: float, beta: float) -> sp.csr_matrix:
    """Complex shifted Laplacian ``A - (alpha + i beta) k**2 I``."""
    A = as_csr(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    shift = complex(alpha, beta) * k * k
    return as_csr(A.astype(complex) - shift * sp.identity(A.shape[0], dtype=complex, format="csr"))


def laplacian_1d(n: int, h: float = 1.0) -> sp.csr_matrix:
    """``tridiag(-1, 2, -1) / h**2`` of order ``n``."""
    return as_csr(sp.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n)) / (h * h))


# --- classification ------------------------------------------------------


class Kind(enum.Enum):
    NONE = 0
    SDD = 1
    SDDM = 2
    SWCDDM = 3


@dataclass(frozen=True)
class MatrixClass:
    """Classification result with the per-row dominance report.

    ``margin[i] = M[i,i] - sum_{j != i} |M[i,j]|``; a row is dominant when the
    margin is at least ``-tol_i`` and strictly dominant when it exceeds
    ``tol_i``, with ``tol_i = rtol * (|M[i,i]| + sum |M[i,j]|)``.
    """

    kind: Kind
    symmetric: bool
    nonpositive_offdiag: bool
    margin: np.ndarray
    dominant: np.ndarray
    strict: np.ndarray

    @property
    def is_sdd(self):
        return self.kind in (Kind.SDD, Kind.SDDM, Kind.SWCDDM)

    @property
    def is_sddm(self):
        return self.kind in (Kind.SDDM, Kind.SWCDDM)

    @property
    def is_swcddm(self):
        return self.kind is Kind.SWCDDM


def row_dominance(M, rtol: float = 0.0):
    """Return ``(margin, dominant, strict)`` arrays for a square matrix."""
    M = as_csr(M)
    if np.iscomplexobj(M.data):
        raise ValueError("row dominance is defined for real matrices")
    n = M.shape[0]
    margin = np.empty(n)
    scale = np.empty(n)
    for i in range(n):
        lo, hi = M.indptr[i], M.indptr[i + 1]
        cols, vals = M.indices[lo:hi], M.data[lo:hi]
        d = float(vals[cols == i].sum())
        # correctly rounded, so an exactly balanced row gives margin 0
        off = math.fsum(abs(v) for c, v in zip(cols, vals) if c != i)
        margin[i] = d - off
        scale[i] = abs(d) + off
    tol = rtol * scale
    return margin, margin >= -tol, margin > tol


def classify_matrix(M, rtol: float = 0.0) -> MatrixClass:
    """Classify a square matrix as SWCDDM, SDDM, SDD or NONE.

    SDD: symmetric and every row diagonally dominant. SDDM: additionally all
    off-diagonal entries nonpositive. SWCDDM: additionally every weakly
    dominant row reaches a strictly dominant row through a chain of nonzero
    off-diagonal entries (breadth-first search from the strict rows).

    ``rtol=0`` applies the definitions exactly to the stored floats.
    """
    M = as_csr(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    n = M.shape[0]
    real = not np.iscomplexobj(M.data)
    symmetric = real and (M != M.T).nnz == 0
    offdiag = M - sp.diags(M.diagonal())
    nonpos = real and (offdiag.nnz == 0 or offdiag.data.max() <= 0)
    margin, dominant, strict = row_dominance(M, rtol) if real else (
        np.full(n, -np.inf), np.zeros(n, bool), np.zeros(n, bool))

    kind = Kind.NONE
    if symmetric and dominant.all():
        kind = Kind.SDD
        if nonpos:
            kind = Kind.SDDM
            if _weak_rows_chained(as_csr(offdiag), strict):
                kind = Kind.SWCDDM
    return MatrixClass(kind, bool(symmetric), bool(nonpos), margin, dominant, strict)


def _weak_rows_chained(offdiag, strict) -> bool:
    n = offdiag.shape[0]
    reached = strict.copy()
    queue = deque(np.flatnonzero(strict))
    # chains follow A(i_{j-1}, i_j) != 0; walk them backwards from strict rows
    back = as_csr(offdiag.T)
    while queue:
        v = queue.popleft()
        for u in back.indices[back.indptr[v]:back.indptr[v + 1]]:
            if not reached[u]:
                reached[u] = True
                queue.append(u)
    return bool(reached.all()) if n else True


def poly_bounded_check(M, c: float, atol: float = 1e-12) -> bool:
    """True iff ``max |M_ij| <= n**c`` and every ``|M_ij| n**c`` is an integer."""
    M = as_csr(M)
    n = M.shape[0]
    bound = float(n) ** c
    vals = np.abs(M.data)
    if len(vals) == 0:
        return True
    if vals.max() > bound:
        return False
    scaled = vals * bound
    return bool(np.all(np.abs(scaled - np.round(scaled)) <= atol))
