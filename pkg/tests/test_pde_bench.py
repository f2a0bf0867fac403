import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nlaprobe.core_la import check_csr, dense_eig
from nlaprobe.pde_bench import (
    Grid2D,
    Kind,
    classify_matrix,
    gen_convdiff_2d,
    gen_diffusion_2d,
    gen_helmholtz,
    laplacian_1d,
    poly_bounded_check,
    shifted_laplacian_preconditioner,
)
from oracles import brute_classify, random_class_matrix, stencil_at


def test_single_point():
    A = gen_diffusion_2d(Grid2D(1, 1), 1.0)
    np.testing.assert_array_equal(A.toarray(), [[4.0]])


def test_constant_stencil_interior_row():
    A = gen_diffusion_2d(Grid2D(3, 3), 1.0).toarray()
    st_ = stencil_at(A, 3, 1, 1)
    assert st_ == {"center": 4.0, "west": -1.0, "east": -1.0, "south": -1.0, "north": -1.0}
    check_csr(gen_diffusion_2d(Grid2D(3, 3), 1.0))


def test_row_major_ordering():
    A = gen_diffusion_2d(Grid2D(3, 2), 1.0).toarray()
    assert A[0, 1] == -1 and A[0, 3] == -1 and A[0, 2] == 0


def test_jump_coefficient_is_swcddm():
    g = Grid2D(8, 8)
    A = gen_diffusion_2d(g, lambda x, y: 1.0 if x < 4.5 else 1e6)
    assert (A != A.T).nnz == 0
    assert classify_matrix(A).kind is Kind.SWCDDM


def test_negative_coefficient_rejected():
    with pytest.raises(ValueError):
        gen_diffusion_2d(Grid2D(3, 3), -1.0)


def test_mesh_scaling():
    A1 = gen_diffusion_2d(Grid2D(3, 3, 1.0), 1.0)
    A2 = gen_diffusion_2d(Grid2D(3, 3, 0.5), 1.0)
    np.testing.assert_array_equal(A2.toarray(), 4 * A1.toarray())


def test_centered_example():
    A = gen_convdiff_2d(Grid2D(3, 3), (1.0, 1.0), (2.0, 0.0), "centered").toarray()
    s = stencil_at(A, 3, 1, 1)
    assert s["center"] == 4 and s["west"] == -2 and s["east"] == 0
    # the zero east coupling is not stored
    M = gen_convdiff_2d(Grid2D(3, 3), (1.0, 1.0), (2.0, 0.0), "centered")
    check_csr(M)


def test_upwind_example():
    A = gen_convdiff_2d(Grid2D(3, 3), (1.0, 1.0), (1.0, 1.0), "upwind").toarray()
    s = stencil_at(A, 3, 1, 1)
    assert s == {"center": 6, "west": -2, "east": -1, "south": -2, "north": -1}


def test_upwind_negative_direction_mirrors():
    A = gen_convdiff_2d(Grid2D(3, 3), (1.0, 1.0), (-1.0, -3.0), "upwind").toarray()
    s = stencil_at(A, 3, 1, 1)
    assert s == {"center": 8, "west": -1, "east": -2, "south": -1, "north": -4}


@pytest.mark.parametrize("scheme", ["centered", "upwind"])
def test_zero_convection_matches_diffusion(scheme):
    g = Grid2D(5, 4)
    a = lambda x, y: (1 + x, 2 + y * y)
    D = gen_diffusion_2d(g, a)
    C = gen_convdiff_2d(g, a, 0.0, scheme)
    assert (D != C).nnz == 0


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0, 10), st.floats(0, 10), st.floats(-50, 50), st.floats(-50, 50),
    st.integers(1, 5), st.integers(1, 5),
)
def test_upwind_always_row_dominant(ax, ay, bx, by, nx, ny):
    A = gen_convdiff_2d(Grid2D(nx, ny), (ax, ay), (bx, by), "upwind")
    M = A.toarray()
    for i in range(M.shape[0]):
        off = sum(abs(M[i, j]) for j in range(M.shape[0]) if j != i)
        assert M[i, i] >= off - 1e-12 * (abs(M[i, i]) + off)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 16), st.integers(0, 16), st.integers(-64, 64), st.integers(-64, 64))
def test_centered_dominance_lost_iff_cell_peclet_exceeds(ax8, ay8, bx8, by8):
    ax, ay, bx, by = ax8 / 8, ay8 / 8, bx8 / 8, by8 / 8
    A = gen_convdiff_2d(Grid2D(4, 4), (ax, ay), (bx, by), "centered")
    cls = classify_matrix(A)
    interior_row = 1 * 4 + 1
    expected = abs(bx) <= 2 * ax and abs(by) <= 2 * ay
    assert bool(cls.dominant[interior_row]) == expected


def test_helmholtz_zero_shift():
    A = laplacian_1d(4)
    assert (gen_helmholtz(A, 0.0) != A).nnz == 0


def test_helmholtz_indefinite():
    A = gen_diffusion_2d(Grid2D(15, 15), 1.0)
    H = gen_helmholtz(A, 1.0)
    w = dense_eig(H.toarray(), symmetric=True).eigenvalues
    assert np.sum(w < 0) >= 1
    assert (H != H.T).nnz == 0


def test_shifted_laplacian_arithmetic():
    P = shifted_laplacian_preconditioner(sp.identity(2), 1.0, 1.0, 0.5)
    np.testing.assert_array_equal(P.diagonal(), [1 - (1 + 0.5j)] * 2)
    B = shifted_laplacian_preconditioner(laplacian_1d(5), 2.0, 1.0, 0.5).toarray()
    assert np.array_equal(B, B.T) and not np.array_equal(B, B.conj().T)


def test_classify_examples():
    assert classify_matrix(sp.csr_matrix([[2.0, 1.0], [1.0, 2.0]])).kind is Kind.SDD
    assert classify_matrix(laplacian_1d(5)).kind is Kind.SWCDDM
    C = np.array([[2, -1, 0, -1], [-1, 2, -1, 0], [0, -1, 2, -1], [-1, 0, -1, 2]], float)
    assert classify_matrix(sp.csr_matrix(C)).kind is Kind.SDDM
    N = sp.csr_matrix([[1.0, 2.0], [2.0, 1.0]])
    assert classify_matrix(N).kind is Kind.NONE


def test_classifier_hierarchy_and_oracle():
    rng = np.random.default_rng(11)
    seen = set()
    for _ in range(300):
        n = int(rng.integers(1, 7))
        M = random_class_matrix(rng, n)
        cls = classify_matrix(sp.csr_matrix(M))
        seen.add(cls.kind.name)
        assert cls.kind.name == brute_classify(M)
        if cls.is_swcddm:
            assert cls.is_sddm and cls.is_sdd
        if cls.is_sddm:
            assert cls.is_sdd
    assert seen == {"NONE", "SDD", "SDDM", "SWCDDM"}


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**31))
def test_diffusion_is_symmetric_swcddm(nx, ny, seed):
    rng = np.random.default_rng(seed)
    vals = rng.uniform(0.1, 100, size=(ny + 2, nx + 2))
    a = lambda x, y: vals[int(round(y)), int(round(x))]
    A = gen_diffusion_2d(Grid2D(nx, ny), a)
    assert (A != A.T).nnz == 0
    assert classify_matrix(A).kind is Kind.SWCDDM


def test_poly_bounded():
    assert poly_bounded_check(laplacian_1d(4), 1)
    M = laplacian_1d(4).tolil()
    M[0, 1] = 0.3
    assert not poly_bounded_check(M, 1)
    assert poly_bounded_check(sp.csr_matrix(-np.eye(3)), 0)
    assert not poly_bounded_check(laplacian_1d(4), 0)
    assert not poly_bounded_check(sp.csr_matrix([[0.5, 0], [0, 1]]), 0)
