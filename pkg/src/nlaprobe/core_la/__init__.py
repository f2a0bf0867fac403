"""Dense and sparse kernels plus the factorization oracles."""

from .dense import (
    EigResult,
    QRResult,
    SvdResult,
    dense_eig,
    dense_svd,
    householder_qr,
    spectral_norm,
)
from .sparse import (
    as_csr,
    check_csr,
    matrix_market_string,
    read_dense_csv,
    read_matrix_market,
    spmv,
    write_dense_csv,
    write_matrix_market,
)

__all__ = [
    "EigResult",
    "QRResult",
    "SvdResult",
    "as_csr",
    "check_csr",
    "dense_eig",
    "dense_svd",
    "householder_qr",
    "matrix_market_string",
    "read_dense_csv",
    "read_matrix_market",
    "spectral_norm",
    "spmv",
    "write_dense_csv",
    "write_matrix_market",
]
