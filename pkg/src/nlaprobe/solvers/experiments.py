"""CG versus RCD stopping times on polynomially decaying spectra."""

from dataclasses import dataclass

import numpy as np

from .. import _rng
from .krylov import cg
from .rcd import rcd


@dataclass(frozen=True)
class StoppingTimes:
    """Per-trial epochs until ``||x_t - x*||_A^2 <= eps ||x_0 - x*||_A^2``.

    ``t_rcd`` is ``ceil(steps / n)``; ``rcd_steps`` keeps the exact count.
    """

    p: float
    n: int
    eps: float
    seed: int
    t_cg: np.ndarray
    t_rcd: np.ndarray
    rcd_steps: np.ndarray

    @property
    def medians(self):
        return float(np.median(self.t_cg)), float(np.median(self.t_rcd))


def decay_problem(p, n, rng):
    """``A = U diag(1^-p, ..., n^-p) U^*`` with Haar ``U``; ``z`` uniform on the sphere."""
    lam = np.arange(1, n + 1, dtype=float) ** (-float(p))
    U = _rng.haar_unitary(rng, n)
    A = (U * lam) @ U.conj().T
    A = (A + A.conj().T) / 2
    z = _rng.complex_sphere(rng, n)
    return A, z


def stopping_time_experiment(p, n, eps, trials, seed, max_epochs=100_000) -> StoppingTimes:
    """Run CG and RCD on ``trials`` independent instances ``(A, b = A z)``.

    Trial ``t`` draws its matrix and right-hand side from stream
    ``(seed, t, MATRIX)`` and its coordinate choices from ``(seed, t, SOLVER)``.
    Both solvers start from ``x_0 = 0``.
    """
    if n > 512:
        raise ValueError("dense Haar generation is limited to n <= 512")
    t_cg = np.empty(trials, dtype=int)
    t_rcd = np.empty(trials, dtype=int)
    steps = np.empty(trials, dtype=int)
    for t in range(trials):
        A, z = decay_problem(p, n, _rng.stream(seed, t, _rng.MATRIX))
        b = A @ z
        tc = cg(A, b, eps=eps, x_star=z, stop="aerr", maxit=max_epochs)
        tr = rcd(A, b, eps=eps, x_star=z, max_epochs=max_epochs, rng=_rng.stream(seed, t, _rng.SOLVER))
        t_cg[t] = tc.epochs[-1]
        t_rcd[t] = tr.epochs[-1]
        steps[t] = tr.steps
    return StoppingTimes(float(p), int(n), float(eps), int(seed), t_cg, t_rcd, steps)


def spd_test_matrix(n, kappa, rng) -> np.ndarray:
    """Real SPD matrix with eigenvalues log-spaced in ``[1, kappa]`` and a Haar basis."""
    lam = np.geomspace(1.0, float(kappa), n)
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    Q = Q * np.sign(np.diag(R))
    A = (Q * lam) @ Q.T
    return (A + A.T) / 2


def cg_error_bound(kappa, k):
    """``2 ((sqrt(kappa) - 1) / (sqrt(kappa) + 1))^k``."""
    s = np.sqrt(kappa)
    return 2.0 * ((s - 1) / (s + 1)) ** np.asarray(k, dtype=float)
