"""CSR sparse matrices, sparse mat-vec, and Matrix Market / CSV I/O.

Sparse matrices are ``scipy.sparse.csr_matrix`` objects kept in canonical
form: sorted column indices within each row, no duplicates, no explicit
zeros. :func:`as_csr` produces that form and :func:`check_csr` verifies it.
"""

import io
import os

import numpy as np
import scipy.sparse as sp


def as_csr(A, dtype=None) -> sp.csr_matrix:
    """Convert ``A`` (dense array or any scipy sparse format) to canonical CSR."""
    M = sp.csr_matrix(A, dtype=dtype, copy=True)
    M.sum_duplicates()
    M.eliminate_zeros()
    M.sort_indices()
    return M


def check_csr(A) -> None:
    """Raise ``ValueError`` unless ``A`` satisfies the canonical CSR invariants."""
    if not sp.isspmatrix_csr(A):
        raise ValueError("expected a csr_matrix")
    nrows, ncols = A.shape
    ptr, idx = A.indptr, A.indices
    if len(ptr) != nrows + 1 or ptr[0] != 0 or np.any(np.diff(ptr) < 0):
        raise ValueError("row_ptr must be nondecreasing with length nrows+1")
    if ptr[-1] != len(idx) or len(idx) != len(A.data):
        raise ValueError("row_ptr, col_idx and values lengths disagree")
    if len(idx) and (idx.min() < 0 or idx.max() >= ncols):
        raise ValueError("column index out of range")
    for i in range(nrows):
        row = idx[ptr[i]:ptr[i + 1]]
        if np.any(np.diff(row) <= 0):
            raise ValueError(f"column indices of row {i} not strictly increasing")
    if np.any(A.data == 0):
        raise ValueError("explicit zeros stored")


def spmv(A, x):
    """Return ``A @ x`` for a CSR matrix.

    Each output entry is accumulated in stored column order, which is what
    scipy's CSR kernel does.
    """
    x = np.asarray(x)
    if x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has shape {x.shape}")
    return sp.csr_matrix(A) @ x


def _open(target, mode):
    if isinstance(target, (str, os.PathLike)):
        return open(target, mode, newline="\n"), True
    return target, False


def _fmt(v) -> str:
    return repr(float(v))


def write_matrix_market(target, A) -> None:
    """Write ``A`` in Matrix Market coordinate format (1-based, general).

    Real matrices get a ``real general`` header, complex ones ``complex
    general``. Entries are written row by row in stored order with
    round-trip float formatting, so output is byte-reproducible.
    """
    A = as_csr(A)
    is_complex = np.iscomplexobj(A.data)
    f, close = _open(target, "w")
    try:
        field = "complex" if is_complex else "real"
        f.write(f"%%MatrixMarket matrix coordinate {field} general\n")
        f.write(f"{A.shape[0]} {A.shape[1]} {A.nnz}\n")
        for i in range(A.shape[0]):
            for jj in range(A.indptr[i], A.indptr[i + 1]):
                v = A.data[jj]
                if is_complex:
                    f.write(f"{i + 1} {A.indices[jj] + 1} {_fmt(v.real)} {_fmt(v.imag)}\n")
                else:
                    f.write(f"{i + 1} {A.indices[jj] + 1} {_fmt(v)}\n")
    finally:
        if close:
            f.close()


def read_matrix_market(source) -> sp.csr_matrix:
    """Read a Matrix Market coordinate file into canonical CSR.

    Supports ``real``/``integer``/``complex`` fields with ``general`` or
    ``symmetric`` symmetry.
    """
    f, close = _open(source, "r")
    try:
        header = f.readline().split()
        if len(header) < 5 or header[0] != "%%MatrixMarket" or header[2] != "coordinate":
            raise ValueError("not a Matrix Market coordinate file")
        field, symmetry = header[3].lower(), header[4].lower()
        if field not in ("real", "integer", "complex"):
            raise ValueError(f"unsupported field {field!r}")
        if symmetry not in ("general", "symmetric"):
            raise ValueError(f"unsupported symmetry {symmetry!r}")
        line = f.readline()
        while line.startswith("%"):
            line = f.readline()
        nrows, ncols, nnz = map(int, line.split())
        rows, cols, vals = [], [], []
        for _ in range(nnz):
            parts = f.readline().split()
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            v = complex(float(parts[2]), float(parts[3])) if field == "complex" else float(parts[2])
            rows.append(i)
            cols.append(j)
            vals.append(v)
            if symmetry == "symmetric" and i != j:
                rows.append(j)
                cols.append(i)
                vals.append(v)
    finally:
        if close:
            f.close()
    dtype = complex if field == "complex" else float
    M = sp.coo_matrix((np.array(vals, dtype=dtype), (rows, cols)), shape=(nrows, ncols))
    return as_csr(M)


def write_dense_csv(target, X) -> None:
    """Write a real 2-D array as CSV, one matrix row per line."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    f, close = _open(target, "w")
    try:
        for row in X:
            f.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if close:
            f.close()


def read_dense_csv(source) -> np.ndarray:
    f, close = _open(source, "r")
    try:
        text = f.read()
    finally:
        if close:
            f.close()
    rows = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return np.array([[float(v) for v in line.split(",")] for line in rows])


def matrix_market_string(A) -> str:
    buf = io.StringIO()
    write_matrix_market(buf, A)
    return buf.getvalue()
