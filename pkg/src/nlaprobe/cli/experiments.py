"""Registered experiments.

Each experiment maps a resolved :class:`ExperimentConfig` to a
:class:`Table`: named columns, rows ordered by trial (never by completion
order), extra ``key=value`` result lines for the CSV header block, and an
optional plot description.
"""

from dataclasses import dataclass, field

import numpy as np

from .. import _rng
from .. import pde_bench as pb
from .. import select as sel
from .. import sketch as sk
from .. import solvers as so
from .. import spectral as spc
from .. import tt
from .config import Param


@dataclass
class Table:
    columns: list
    rows: list
    results: dict = field(default_factory=dict)
    # ("line", x, [ys], logy) or ("hist", column, log)
    plot: tuple = None


@dataclass(frozen=True)
class Experiment:
    name: str
    summary: str
    params: tuple
    run: object


REGISTRY = {}


def experiment(name, summary, *params):
    def deco(fn):
        REGISTRY[name] = Experiment(name, summary, tuple(params), fn)
        return fn
    return deco


# --- pde_bench ------------------------------------------------------------


@experiment(
    "pde_classify", "classify a convection-diffusion matrix; per-row dominance margins",
    Param("nx", "int", 8), Param("ny", "int", 8),
    Param("ax", "float", 1.0), Param("ay", "float", 1.0),
    Param("bx", "float", 0.0), Param("by", "float", 0.0),
    Param("scheme", "str", "centered", "centered|upwind"),
)
def _pde_classify(cfg):
    p = cfg.params
    A = pb.gen_convdiff_2d(pb.Grid2D(p["nx"], p["ny"]), (p["ax"], p["ay"]), (p["bx"], p["by"]), p["scheme"])
    c = pb.classify_matrix(A)
    rows = [(i, float(c.margin[i]), int(c.dominant[i]), int(c.strict[i])) for i in range(A.shape[0])]
    return Table(["row", "margin", "dominant", "strict"], rows,
                 {"kind": c.kind.name, "nnz": A.nnz}, ("line", "row", ["margin"], False))


# --- solvers ----------------------------------------------------------------


@experiment(
    "cg_bound", "CG A-norm error ratio against the Chebyshev bound on log-spaced spectra",
    Param("n", "int", 100), Param("kappa", "float", 1e3), Param("trials", "int", 5),
)
def _cg_bound(cfg):
    p = cfg.params
    rows, worst = [], -np.inf
    for t in range(p["trials"]):
        rng = _rng.stream(cfg.seed, t, _rng.MATRIX)
        A = so.spd_test_matrix(p["n"], p["kappa"], rng)
        x = _rng.stream(cfg.seed, t, _rng.RHS).standard_normal(p["n"])
        tr = so.cg(A, A @ x, x_star=x, eps=1e-24, stop="aerr", maxit=4 * p["n"])
        ratio = tr.error_ratios()
        bound = so.cg_error_bound(p["kappa"], np.arange(len(ratio)))
        worst = max(worst, float(np.max(ratio - bound)))
        rows += [(t, k, float(ratio[k]), float(bound[k])) for k in range(len(ratio))]
    return Table(["trial", "k", "ratio", "bound"], rows, {"max_excess": worst},
                 ("line", "k", ["ratio", "bound"], True))


@experiment(
    "stopping_times", "CG vs RCD epochs to reach eps on polynomially decaying spectra",
    Param("p", "float", 1.0), Param("n", "int", 64), Param("eps", "float", 1e-3),
    Param("trials", "int", 20),
)
def _stopping_times(cfg):
    p = cfg.params
    st = so.stopping_time_experiment(p["p"], p["n"], p["eps"], p["trials"], cfg.seed)
    rows = [(t, int(st.t_cg[t]), int(st.t_rcd[t]), int(st.rcd_steps[t])) for t in range(p["trials"])]
    m = st.medians
    return Table(["trial", "t_cg", "t_rcd", "rcd_steps"], rows,
                 {"median_t_cg": m[0], "median_t_rcd": m[1]}, ("hist", "t_rcd", False))


@experiment(
    "rcd_contraction", "Monte Carlo one-step RCD contraction vs 1 - lambda_min/tr(A)",
    Param("n", "int", 8), Param("instances", "int", 5), Param("trials", "int", 2000),
)
def _rcd_contraction(cfg):
    p = cfg.params
    rows = []
    for i in range(p["instances"]):
        rng = _rng.stream(cfg.seed, i, _rng.MATRIX)
        A = so.spd_test_matrix(p["n"], 10.0 ** rng.uniform(0.5, 2), rng)
        est = so.rcd_contraction_experiment(A, p["trials"], seed=_seed_child(cfg.seed, i))
        rows.append((i, est.mean, est.stderr, est.expected, est.z_score))
    return Table(["instance", "mean", "stderr", "expected", "z"], rows)


@experiment(
    "two_grid", "two-grid error propagation norm for 1D Poisson over a mesh sweep",
    Param("nc", "ints", (3, 7, 15)), Param("omega", "float", 2.0 / 3.0), Param("nu", "int", 2),
    Param("smoother", "str", "jacobi", "jacobi|gauss-seidel"),
)
def _two_grid(cfg):
    p = cfg.params
    rows = []
    for nc in p["nc"]:
        s = so.poisson_1d_setup(nc, p["smoother"], p["omega"], p["nu"])
        r = so.two_grid_contraction(s)
        rows.append((s.h, r.norm_Q, r.smoothing, r.approximation))
    return Table(["h", "norm_Q", "smoothing", "approximation"], rows,
                 {"max_norm_Q": max(r[1] for r in rows)}, ("line", "h", ["norm_Q"], False))


@experiment(
    "forsythe", "restarted s-step CG residual directions: even/odd increments",
    Param("eigs", "floats", (1.0, 4.0)), Param("s", "int", 1), Param("K", "int", 402),
    Param("starts", "int", 3),
)
def _forsythe(cfg):
    p = cfg.params
    A = np.diag(np.asarray(p["eigs"], float))
    rows = []
    for t in range(p["starts"]):
        b = _rng.stream(cfg.seed, t, _rng.RHS).standard_normal(len(p["eigs"]))
        res = so.forsythe_iteration(A, b, np.zeros_like(b), p["s"], p["K"])
        ev, od = res.even_increments, res.odd_increments
        rows += [(t, k, float(ev[k]), float(od[k]) if k < len(od) else float("nan")) for k in range(len(ev))]
    return Table(["start", "k", "even_increment", "odd_increment"], rows,
                 plot=("line", "k", ["even_increment", "odd_increment"], True))


@experiment(
    "gmres_convdiff", "GMRES residual history on an upwind convection-diffusion matrix",
    Param("nx", "int", 16), Param("bx", "float", 10.0), Param("by", "float", 10.0),
    Param("restart", "int", 0, "0 = no restart"), Param("eps", "float", 1e-8),
)
def _gmres(cfg):
    p = cfg.params
    A = pb.gen_convdiff_2d(pb.Grid2D(p["nx"], p["nx"]), 1.0, (p["bx"], p["by"]), "upwind")
    b = _rng.stream(cfg.seed, 0, _rng.RHS).standard_normal(A.shape[0])
    tr = so.gmres(A, b, restart=p["restart"] or None, eps=p["eps"])
    rows = list(zip(tr.iterations, map(float, tr.residuals)))
    return Table(["iteration", "residual"], rows, {"converged": tr.converged},
                 ("line", "iteration", ["residual"], True))


@experiment(
    "power_method", "power iteration on a random Wishart matrix; estimate history",
    Param("n", "int", 50), Param("maxit", "int", 500), Param("tol", "float", 1e-10),
)
def _power(cfg):
    p = cfg.params
    B = _rng.stream(cfg.seed, 0, _rng.MATRIX).standard_normal((p["n"], p["n"]))
    A = B @ B.T / p["n"]
    r = so.power_method(A, maxit=p["maxit"], tol=p["tol"], seed=cfg.seed)
    ref = float(np.max(np.abs(np.linalg.eigvalsh(A))))
    rows = [(i, float(e)) for i, e in enumerate(r.estimates)]
    return Table(["iteration", "estimate"], rows, {"rho": r.rho, "reference": ref, "converged": r.converged},
                 ("line", "iteration", ["estimate"], False))


# --- sketch -----------------------------------------------------------------


@experiment(
    "osi_scan", "embedding failure counts alpha < threshold over a (k, zeta) grid",
    Param("family", "str", "sparsestack"), Param("n", "int", 1024), Param("r", "int", 8),
    Param("k", "ints", (16, 32)), Param("zeta", "ints", (4,)),
    Param("threshold", "float", 0.1), Param("trials", "int", 50),
    Param("subspace", "str", "haar"),
)
def _osi_scan(cfg):
    p = cfg.params
    zeta = p["zeta"] if p["family"] == "sparsestack" else (None,)
    scan = sk.osi_scan(p["family"], p["n"], p["r"], p["k"], zeta, p["threshold"], p["trials"], cfg.seed,
                       p["subspace"])
    rows = [(s.family, s.n, s.r, s.k, s.zeta, s.trials, s.failures, s.failure_rate) for s in scan]
    return Table(["family", "n", "r", "k", "zeta", "trials", "failures", "failure_rate"], rows,
                 plot=("line", "k", ["failure_rate"], False))


@experiment(
    "sketch_solve", "sketch-and-solve least squares residual ratio per trial",
    Param("family", "str", "gaussian"), Param("m", "int", 512), Param("d", "int", 10),
    Param("k", "int", 60), Param("zeta", "int", 4), Param("trials", "int", 20),
)
def _sketch_solve(cfg):
    p = cfg.params
    rng = _rng.stream(cfg.seed, _rng.MATRIX)
    A = rng.standard_normal((p["m"], p["d"]))
    b = rng.standard_normal(p["m"])
    rows = []
    for t in range(p["trials"]):
        op = sk.make_sketch(p["family"], p["m"], p["k"], p["zeta"] if p["family"] == "sparsestack" else None,
                            seed=cfg.seed, keys=(t,))
        r = sk.sketch_and_solve_ls(A, b, op)
        rows.append((t, r.ratio, r.alpha))
    return Table(["trial", "ratio", "alpha"], rows, plot=("hist", "ratio", False))


@experiment(
    "randomized_svd", "randomized range finder error ratio against the optimal rank-r error",
    Param("family", "str", "gaussian"), Param("m", "int", 200), Param("n", "int", 128),
    Param("r", "int", 10), Param("k", "int", 20), Param("decay", "float", 1.0),
    Param("trials", "int", 10),
)
def _rsvd(cfg):
    p = cfg.params
    rng = _rng.stream(cfg.seed, _rng.MATRIX)
    U = np.linalg.qr(rng.standard_normal((p["m"], p["n"])))[0]
    V = np.linalg.qr(rng.standard_normal((p["n"], p["n"])))[0]
    A = (U * np.arange(1, p["n"] + 1, dtype=float) ** -p["decay"]) @ V.T
    rows = []
    for t in range(p["trials"]):
        op = sk.make_sketch(p["family"], p["n"], p["k"], seed=cfg.seed, keys=(t,))
        r = sk.randomized_svd(A, op, p["r"])
        rows.append((t, r.ratio, r.ratio_truncated))
    return Table(["trial", "ratio", "ratio_truncated"], rows, plot=("hist", "ratio_truncated", False))


# --- select -----------------------------------------------------------------


@experiment(
    "cssp_compare", "column selection residuals vs the brute-force optimum",
    Param("m", "int", 8), Param("n", "int", 8), Param("k", "int", 3), Param("trials", "int", 20),
    Param("norm", "str", "fro", "fro|spectral"),
)
def _cssp(cfg):
    p = cfg.params
    rows = []
    for t in range(p["trials"]):
        A = _rng.stream(cfg.seed, t, _rng.MATRIX).standard_normal((p["m"], p["n"]))
        opt = sel.brute_cssp(A, p["k"], p["norm"])
        for name, res in (("cpqr", sel.cpqr_select(A, p["k"])), ("gecp", sel.cross_selection(A, p["k"]))):
            val = sel.projection_residual(A, res.J, p["norm"])
            best = opt.fro if p["norm"] == "fro" else opt.spectral
            rows.append((t, name, val, best, val / best if best > 0 else 1.0))
    return Table(["trial", "method", "residual", "optimal", "ratio"], rows, plot=("hist", "ratio", False))


@experiment(
    "dlr_probe", "GECP cross approximation of the fermionic kernel: error vs rank",
    Param("Lambda", "float", 100.0), Param("eps", "float", 1e-6), Param("kmax", "int", 80),
    Param("nt", "int", 400), Param("nw", "int", 401),
)
def _dlr(cfg):
    p = cfg.params
    r = sel.dlr_probe(p["Lambda"], p["eps"], p["kmax"], p["nt"], p["nw"])
    rows = [(j, float(e)) for j, e in enumerate(r.errors)]
    return Table(["k", "max_error"], rows, {"k_needed": r.k, "linear_rate": r.linear_rate, "log_rate": r.log_rate},
                 ("line", "k", ["max_error"], True))


@experiment(
    "nystrom_submodularity", "exhaustive diminishing-returns check for K = (L + gamma I)^-1",
    Param("n", "int", 6), Param("gamma", "floats", (0.01, 0.1, 1.0)),
)
def _submod(cfg):
    p = cfg.params
    L = sel.path_laplacian(p["n"])
    rows = []
    for g in p["gamma"]:
        K = np.linalg.inv(L + g * np.eye(p["n"]))
        r = sel.diminishing_returns_check(K)
        rows.append((g, r.pairs, r.violations, r.worst))
    return Table(["gamma", "pairs", "violations", "worst"], rows)


@experiment(
    "volume_objective", "volume-sampling objective y_k and a worst-case trace search",
    Param("lam", "floats", (1.0, 0.5, 0.25, 0.125, 0.0625)), Param("trials", "int", 50),
)
def _volume(cfg):
    lam = np.asarray(cfg.params["lam"], float)
    rows = []
    for k in range(1, len(lam)):
        g = sel.trace_cssp_worst_vs_volume(lam, k, trials=cfg.params["trials"], seed=cfg.seed, local_steps=20)
        rows.append((k, float(sel.volume_objective(lam, k)), g.x_hat))
    return Table(["k", "y_k", "x_hat"], rows, plot=("line", "k", ["y_k", "x_hat"], True))


@experiment(
    "kahan_mu", "rank-revealing factor mu of column-pivoted QR on the Kahan matrix",
    Param("n", "int", 30), Param("ks", "ints", (4, 8, 16, 24)), Param("theta", "float", 1.2),
)
def _kahan(cfg):
    p = cfg.params
    K = sel.kahan_matrix(p["n"], p["theta"])
    rows = [(k, sel.rrqr_mu(K, sel.cpqr_lowrank(K, k), k)) for k in p["ks"]]
    return Table(["k", "mu"], rows, plot=("line", "k", ["mu"], True))


# --- spectral ---------------------------------------------------------------


@experiment(
    "shattering", "kappa_eig of a Jordan block under normalized Ginibre perturbations",
    Param("n", "int", 16), Param("delta", "float", 1e-2), Param("trials", "int", 100),
)
def _shatter(cfg):
    p = cfg.params
    J = np.diag(np.ones(p["n"] - 1), 1)
    r = spc.shattering_experiment(J, p["delta"], p["trials"], cfg.seed)
    rows = [(t, float(r.kappas[t]), float(r.exponents[t])) for t in range(p["trials"])]
    return Table(["trial", "kappa_eig", "c_hat"], rows,
                 {"median_c_hat": r.median_exponent, "flagged": r.flagged}, ("hist", "kappa_eig", True))


@experiment(
    "minami", "minimum eigenvalue gap of a randomly perturbed tridiagonal Toeplitz matrix",
    Param("n", "int", 32), Param("delta", "float", 1e-3), Param("dist", "str", "uniform"),
    Param("trials", "int", 200),
)
def _minami(cfg):
    p = cfg.params
    r = spc.minami_gap_experiment(spc.toeplitz_tridiag(p["n"]), p["delta"], p["dist"], p["trials"], cfg.seed)
    rows = [(t, float(r.gaps[t]), float(r.exponents[t])) for t in range(p["trials"])]
    return Table(["trial", "gap", "c_hat"], rows, {"min_gap": r.min, "median_gap": r.median},
                 ("hist", "gap", True))


@experiment(
    "sign_error", "sup-norm sign approximation error of repeated composition stages",
    Param("stages", "str", "ns", "comma-separated stage list, repeated"), Param("delta", "float", 0.1),
    Param("repeats", "int", 20), Param("grid", "int", 10_000),
)
def _sign(cfg):
    p = cfg.params
    unit = spc.CompositionScheme.parse(p["stages"])
    rows, s = [], spc.CompositionScheme()
    for t in range(p["repeats"] + 1):
        e = spc.sign_error(s, p["delta"], p["grid"])
        rows.append((t, s.cost, e.error, e.alternations))
        s = s + unit
    return Table(["repeats", "cost", "error", "alternations"], rows, plot=("line", "cost", ["error"], True))


# --- tt ---------------------------------------------------------------------


@experiment(
    "tt_probe", "TT-SVD and ALS error relative to the per-edge lower bound",
    Param("dims", "ints", (5, 5, 5, 5)), Param("ranks", "ints", (2, 2, 2)), Param("trials", "int", 10),
    Param("als_starts", "int", 1),
)
def _tt(cfg):
    p = cfg.params
    rows = []
    for t in range(p["trials"]):
        X = _rng.stream(cfg.seed, t, _rng.MATRIX).standard_normal(p["dims"])
        r = tt.tt_quasi_opt_probe(X, p["ranks"], trials=p["als_starts"], seed=_seed_child(cfg.seed, t))
        rows.append((t, r.err_svd, r.lower, r.ratio_svd, r.ratio_best))
    return Table(["trial", "err_svd", "lower", "ratio_svd", "ratio_best"], rows, plot=("hist", "ratio_svd", False))


def _seed_child(seed, t) -> int:
    """Deterministic integer seed for a sub-experiment of trial ``t``."""
    return int(np.random.SeedSequence([int(seed), int(t)]).generate_state(1)[0])
