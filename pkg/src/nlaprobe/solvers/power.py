"""Power method for the spectral radius."""

from dataclasses import dataclass

import numpy as np

from .. import _rng
from .._errors import ConvergenceError


@dataclass
class PowerResult:
    rho: float
    estimates: np.ndarray
    converged: bool

    def __iter__(self):
        return iter((self.rho, self.estimates))


def power_method(A, v0=None, maxit=1000, tol=1e-10, seed=0) -> PowerResult:
    """Estimate the spectral radius by power iteration.

    ``estimates[k]`` is ``|v_k^* A v_k|`` for the normalized iterate ``v_k``.
    Stops when consecutive estimates agree to ``tol`` relative. Defective or
    non-normal matrices may converge very slowly; the estimates expose it.
    An iterate that collapses to zero is replaced once by a random vector.
    """
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    rng = _rng.stream(seed, _rng.SOLVER)
    v = rng.standard_normal(n) if v0 is None else np.asarray(v0, dtype=np.result_type(A.dtype, float))
    reseeded = False
    est = []
    for _ in range(maxit):
        nv = np.linalg.norm(v)
        if nv == 0 or not np.isfinite(nv):
            if reseeded:
                raise ConvergenceError("power iterate vanished twice")
            reseeded = True
            v = rng.standard_normal(n)
            continue
        v = v / nv
        w = A @ v
        if np.linalg.norm(w) == 0:
            v = w
            continue
        est.append(abs(np.vdot(v, w)))
        if len(est) > 1 and abs(est[-1] - est[-2]) <= tol * est[-1]:
            return PowerResult(est[-1], np.array(est), True)
        v = w
    return PowerResult(est[-1] if est else np.nan, np.array(est), False)
