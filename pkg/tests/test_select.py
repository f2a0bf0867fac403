import io
import itertools
from fractions import Fraction

import numpy as np
import pytest

from nlaprobe._errors import BudgetExceededError, NotPSDError, RankDeficientError
from nlaprobe.select import (
    KernelGrid,
    brute_cssp,
    cpqr_lowrank,
    cpqr_select,
    cross_selection,
    diminishing_returns_check,
    dlr_probe,
    fermionic_grid,
    fermionic_kernel,
    gecp_cross,
    hilbert_grid,
    kahan_matrix,
    nystrom_error,
    path_laplacian,
    pivoted_cholesky,
    projection_residual,
    rbf_grid,
    rrqr_mu,
    schur_horn_equal_diagonal,
    trace_cssp_worst_vs_volume,
    volume_objective,
    with_oracle,
    write_selection_csv,
)
from oracles import kdpp_expected_trace, nuclear_error


def random_psd(rng, n, rank=None):
    B = rng.standard_normal((n, rank or n))
    return B @ B.T


# --- cpqr / brute -------------------------------------------------------


def test_cpqr_orthogonal_columns_forced_order():
    A = np.diag([3.0, 2.0, 1.0])
    res = cpqr_select(A, 3)
    assert res.J == (0, 1, 2) and res.fro == pytest.approx(0, abs=1e-15)


def test_cpqr_tie_lowest_index():
    A = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    assert cpqr_select(A, 1).J == (0,)


def test_cpqr_history_nonincreasing_and_envelope():
    rng = np.random.default_rng(0)
    for _ in range(30):
        A = rng.standard_normal((8, 8))
        for k in range(1, 5):
            res = cpqr_select(A, k)
            assert np.all(np.diff(res.history) <= 1e-12)
            assert res.history[-1] == pytest.approx(res.fro, rel=1e-10)
            s = np.linalg.svd(A, compute_uv=False)
            assert res.spectral <= 2**k * np.sqrt(8 - k) * s[k] * (1 + 1e-12)


def test_brute_rank_k_zero_and_dominates():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((8, 2)) @ rng.standard_normal((2, 8))
    assert brute_cssp(A, 2).optimal <= 1e-12 * np.linalg.norm(A)
    B = rng.standard_normal((8, 8))
    for k in (1, 2, 3):
        opt = brute_cssp(B, k)
        assert opt.optimal <= cpqr_select(B, k).fro * (1 + 1e-12)
        r = with_oracle(cpqr_select(B, k), B)
        assert r.ratio >= 1 - 1e-12


def test_brute_spectral_norm_and_budget():
    rng = np.random.default_rng(2)
    B = rng.standard_normal((6, 6))
    res = brute_cssp(B, 2, norm="spectral")
    vals = [projection_residual(B, J, "spectral") for J in itertools.combinations(range(6), 2)]
    assert res.optimal == min(vals)
    with pytest.raises(BudgetExceededError):
        brute_cssp(np.ones((2, 40)), 20)


def test_projection_residual_empty_and_full():
    A = np.random.default_rng(3).standard_normal((5, 4))
    assert projection_residual(A, []) == pytest.approx(np.linalg.norm(A))
    assert projection_residual(A, range(4)) <= 1e-14 * np.linalg.norm(A) * 10


def test_kahan_shows_exponential_mu_growth():
    A = kahan_matrix(48)
    assert cpqr_select(A, 24).J == tuple(range(24))
    mus = [rrqr_mu(A, cpqr_lowrank(A, k), k) for k in (4, 8, 16, 24)]
    assert all(b > 2 * a for a, b in zip(mus, mus[1:]))


def test_rrqr_mu_examples():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((10, 10))
    U, s, Vt = np.linalg.svd(A)
    Ak = (U[:, :4] * s[:4]) @ Vt[:4]
    assert rrqr_mu(A, Ak, 4) == pytest.approx(1.0, abs=1e-12)
    D = np.diag([5.0, 4.0, 3.0, 2.0, 1.0])
    assert rrqr_mu(D, np.diag([5.0, 4.0, 0, 0, 0]), 2) == pytest.approx(1.0, abs=1e-15)
    for seed in range(10):
        A = np.random.default_rng(seed).standard_normal((10, 10))
        assert rrqr_mu(A, cpqr_lowrank(A, 4), 4) >= 1


# --- gecp / pivoted cholesky ---------------------------------------------


def test_gecp_rank_one_exact():
    rng = np.random.default_rng(5)
    M = np.outer(rng.standard_normal(7), rng.standard_normal(9))
    ca = gecp_cross(M, 3)
    assert ca.k == 1  # second pivot underflows
    assert ca.max_error(M) <= 1e-14 * np.abs(M).max() * 10


def test_gecp_interpolates_selected_rows_and_columns():
    rng = np.random.default_rng(6)
    for _ in range(20):
        M = rng.standard_normal((8, 8))
        ca = gecp_cross(M, 3)
        H = ca.evaluate()
        scale = np.abs(M).max()
        assert np.abs(H[ca.I] - M[ca.I]).max() <= 1e-12 * scale
        assert np.abs(H[:, ca.J] - M[:, ca.J]).max() <= 1e-12 * scale
        # column-space residual shrinks with every added pivot column
        assert np.all(np.diff(cross_selection(M, 3).history) <= 1e-12 * scale)


def test_gecp_max_residual_monotone_on_psd_only():
    rng = np.random.default_rng(16)
    K = random_psd(rng, 10)
    assert np.all(np.diff(gecp_cross(K, 8).errors) <= 1e-12 * np.abs(K).max())
    # general matrices: elimination can grow the max-norm residual
    grew = any(np.any(np.diff(gecp_cross(rng.standard_normal((8, 8)), 4).errors) > 0) for _ in range(20))
    assert grew


def test_gecp_pivot_order_is_greedy():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    ca = gecp_cross(M, 1)
    assert (ca.I[0], ca.J[0]) == (1, 1)
    T = np.array([[1.0, 1.0], [1.0, 1.0]])
    ca = gecp_cross(T, 1)
    assert (ca.I[0], ca.J[0]) == (0, 0)


def test_gecp_hilbert():
    ca = gecp_cross(hilbert_grid(64), 10)
    assert ca.max_error(hilbert_grid(64).K) < 1e-7


def test_pivoted_cholesky_diagonal_and_errors():
    res = pivoted_cholesky(np.diag([3.0, 2.0, 1.0]), 3)
    assert res.J == (0, 1, 2)
    assert res.history == (6.0, 3.0, 1.0, 0.0)
    with pytest.raises(NotPSDError):
        pivoted_cholesky(np.diag([1.0, -1.0]), 2)


def test_pivoted_cholesky_matches_gecp_on_psd():
    rng = np.random.default_rng(7)
    for _ in range(50):
        K = random_psd(rng, 8)
        a = pivoted_cholesky(K, 5)
        b = gecp_cross(K, 5)
        assert a.J == tuple(b.I) == tuple(b.J)


def test_pivoted_cholesky_rbf_trace_monotone_and_rank_stop():
    res = pivoted_cholesky(rbf_grid(64).K, 30)
    assert np.all(np.diff(res.history) <= 0)
    rng = np.random.default_rng(8)
    low = pivoted_cholesky(random_psd(rng, 10, rank=3), 6)
    assert len(low.J) <= 4 and low.history[-1] <= 1e-10


def test_pivoted_cholesky_trace_equals_nystrom():
    rng = np.random.default_rng(9)
    K = random_psd(rng, 8)
    res = pivoted_cholesky(K, 3)
    assert res.history[-1] == pytest.approx(nuclear_error(K, res.J), rel=1e-9)


def test_fermionic_kernel_stable_form():
    t = np.array([0.0, 0.3, 1.0])
    w = np.array([-50.0, -1.0, 0.0, 2.0, 50.0])
    ref = np.exp(-np.outer(t, w)) / (1 + np.exp(-w))
    np.testing.assert_allclose(fermionic_kernel(t, w), ref, rtol=1e-13)
    K = fermionic_grid(1e4, 50, 51).K
    assert np.all(np.isfinite(K))
    g = fermionic_grid(10, 20, 21)
    assert np.all(np.diff(g.t) > 0) and np.all(np.diff(g.omega) > 0)
    assert 0 < g.t[0] and g.t[-1] < 1


def test_dlr_probe_small_k():
    p = dlr_probe(100.0, 1e-6)
    assert 0 < p.k <= 50 and p.error <= 1e-6
    assert p.k < p.linear_rate


def test_kernel_grid_csv():
    g = hilbert_grid(3)
    buf = io.StringIO()
    g.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t\\omega,0.0,1.0,2.0" and len(lines) == 4
    assert isinstance(g, KernelGrid)


def test_selection_csv():
    res = cross_selection(np.random.default_rng(0).standard_normal((5, 5)), 2)
    buf = io.StringIO()
    write_selection_csv(buf, res)
    assert buf.getvalue().splitlines()[0] == "step,index,row_index,residual"


# --- nystrom / submodularity ----------------------------------------------


def test_nystrom_trivial_cases():
    K = random_psd(np.random.default_rng(10), 6)
    assert nystrom_error(K, range(6)) == pytest.approx(0, abs=1e-9 * np.trace(K))
    assert nystrom_error(K, []) == pytest.approx(np.trace(K))
    with pytest.raises(RankDeficientError):
        nystrom_error(np.ones((3, 3)), [0, 1])


def test_nystrom_equals_cx_error_of_square_root():
    rng = np.random.default_rng(11)
    for _ in range(10):
        K = random_psd(rng, 7)
        w, V = np.linalg.eigh(K)
        A = (V * np.sqrt(np.maximum(w, 0))) @ V.T
        I = [0, 3, 5]
        assert nystrom_error(K, I) == pytest.approx(projection_residual(A, I) ** 2, rel=1e-9)
        err2 = nystrom_error(K, I, "spectral")
        assert err2 == pytest.approx(projection_residual(A, I, "spectral") ** 2, rel=1e-8)


@pytest.mark.parametrize("gamma", [0.01, 0.1, 1.0])
def test_inverse_laplacian_diminishing_returns(gamma):
    K = np.linalg.inv(path_laplacian(6) + gamma * np.eye(6))
    rep = diminishing_returns_check(K)
    assert rep.passed and rep.pairs == 6 * (3**5 - 2**5)


def test_diminishing_returns_check_detects_violations():
    rng = np.random.default_rng(12)
    found = 0
    for _ in range(5):
        found += diminishing_returns_check(random_psd(rng, 5)).violations
    assert found > 0


# --- volume objective -----------------------------------------------------


def test_volume_objective_examples():
    assert volume_objective([1, 1], 1) == 1
    assert volume_objective([1, 2], 1) == Fraction(4, 3)
    assert volume_objective([3, 4, 5], 0) == 12
    assert volume_objective([1.0, 2.0], 1) == pytest.approx(4 / 3, rel=1e-15)


def test_volume_objective_matches_kdpp_enumeration():
    rng = np.random.default_rng(13)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        lam = rng.uniform(0.01, 10, n)
        for k in range(n):
            assert volume_objective(lam, k) == pytest.approx(kdpp_expected_trace(lam, k), rel=1e-10)


def test_volume_objective_scale_covariance_and_overflow():
    lam = np.random.default_rng(14).uniform(0.5, 2, 6)
    for k in range(6):
        assert volume_objective(7.5 * lam, k) == pytest.approx(7.5 * volume_objective(lam, k), rel=1e-13)
    big = np.full(400, 1e300)
    assert volume_objective(big, 3) == pytest.approx(1e300 * 4 * (400 - 3) / 4, rel=1e-12)
    with pytest.raises(ValueError):
        volume_objective([1.0, -1.0], 0)


def test_schur_horn_equal_diagonal():
    mu = np.array([1.0, 2.0, 4.0, 8.0, 0.5])
    V = schur_horn_equal_diagonal(mu)
    M = V.T @ np.diag(mu) @ V
    np.testing.assert_allclose(V.T @ V, np.eye(5), atol=1e-14)
    assert np.ptp(np.diag(M)) <= 1e-10
    np.testing.assert_allclose(np.linalg.eigvalsh(M), np.sort(mu), rtol=1e-12)


def test_trace_cssp_k_n_minus_1_equals_volume():
    rng = np.random.default_rng(15)
    for _ in range(5):
        lam = rng.uniform(0.1, 3, 5)
        r = trace_cssp_worst_vs_volume(lam, 4, trials=20, local_steps=10, seed=1)
        assert r.x_hat == pytest.approx(r.y, abs=1e-8)


def test_trace_cssp_lower_bound_below_volume():
    lam = [1, 0.5, 0.25, 0.125]
    r = trace_cssp_worst_vs_volume(lam, 2, trials=100, local_steps=50)
    assert r.x_hat <= r.y * (1 + 1e-12) and r.gap >= -1e-12
    eq = trace_cssp_worst_vs_volume([2.0, 2.0, 2.0], 1, trials=10, local_steps=5)
    assert eq.x_hat == pytest.approx(4.0) and eq.y == pytest.approx(4.0)
