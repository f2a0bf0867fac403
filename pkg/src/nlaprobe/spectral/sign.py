"""Composite polynomial approximations of the sign and step functions.

A scheme is a sequence of stages applied left to right:

``square``  ``x -> x^2``              (1 matrix multiply)
``purify``  ``x -> x (2 - x)``        (1 multiply: ``2X - X X``)
``cubic``   ``x -> a x + b x^3``      (2 multiplies: ``X^2``, then ``X^2 X``)
``ns``      Newton-Schulz, cubic with ``a = 3/2``, ``b = -1/2``

Costs count matrix-matrix products only; no product is reused across
stages. Alternating ``square`` and ``purify`` drives ``[0, 1]`` to ``{0, 1}``
with the unstable fixed point ``mu = (sqrt(5) - 1) / 2``.
"""

from dataclasses import dataclass

import numpy as np

MU = (np.sqrt(5.0) - 1.0) / 2.0
_COST = {"square": 1, "purify": 1, "cubic": 2}


@dataclass(frozen=True)
class CompositionScheme:
    stages: tuple = ()

    def __post_init__(self):
        for st in self.stages:
            if st[0] not in _COST or (st[0] == "cubic") != (len(st) == 3):
                raise ValueError(f"bad stage {st!r}")

    @classmethod
    def parse(cls, text):
        """Parse ``"square,purify,ns,cubic:1.5:-0.5"`` (empty string: identity)."""
        stages = []
        for tok in filter(None, (t.strip() for t in str(text).split(","))):
            name, *args = tok.split(":")
            name = name.lower()
            if name in ("ns", "newton_schulz", "newton-schulz"):
                stages.append(("cubic", 1.5, -0.5))
            elif name == "cubic":
                if len(args) != 2:
                    raise ValueError("cubic stage needs cubic:a:b")
                stages.append(("cubic", float(args[0]), float(args[1])))
            elif name in ("square", "purify") and not args:
                stages.append((name,))
            else:
                raise ValueError(f"unknown stage {tok!r}")
        return cls(tuple(stages))

    @classmethod
    def alternating(cls, pairs):
        """``pairs`` repetitions of ``[square, purify]``."""
        return cls((("square",), ("purify",)) * int(pairs))

    @classmethod
    def newton_schulz(cls, T):
        return cls((("cubic", 1.5, -0.5),) * int(T))

    @property
    def cost(self) -> int:
        return sum(_COST[st[0]] for st in self.stages)

    @property
    def is_odd(self) -> bool:
        return all(st[0] == "cubic" for st in self.stages)

    def __add__(self, other):
        return CompositionScheme(self.stages + other.stages)

    def __len__(self):
        return len(self.stages)

    def __str__(self):
        out = []
        for st in self.stages:
            out.append(st[0] if st[0] != "cubic" else f"cubic:{st[1]!r}:{st[2]!r}")
        return ",".join(out)


@dataclass
class CompositionValue:
    values: np.ndarray
    cost: int
    flagged: bool = False


def eval_composition(scheme: CompositionScheme, x) -> CompositionValue:
    """Apply ``scheme`` to scalars or to a symmetric matrix.

    A 2-D square argument takes the matrix path, built only from products,
    sums and scalings; ``cost`` counts the products actually formed. Inputs
    outside ``[-1, 1]`` (spectral norm above 1 for matrices) are evaluated
    but ``flagged``, since the iteration may diverge there.
    """
    x = np.asarray(x, dtype=float)
    matrix = x.ndim == 2
    if matrix:
        if x.shape[0] != x.shape[1] or not np.allclose(x, x.T, rtol=0, atol=1e-14 * max(np.abs(x).max(), 1.0)):
            raise ValueError("matrix path needs a symmetric matrix")
        flagged = bool(np.linalg.norm(x, 2) > 1 + 1e-12)
        n = x.shape[0]
        X = x.copy()
        cost = 0
        for st in scheme.stages:
            X2 = X @ X
            cost += 1
            if st[0] == "square":
                X = X2
            elif st[0] == "purify":
                X = 2 * X - X2
            else:
                X = st[1] * X + st[2] * (X2 @ X)
                cost += 1
        assert cost == scheme.cost
        return CompositionValue(X, cost, flagged)
    flagged = bool(np.any(np.abs(x) > 1))
    y = x.copy()
    for st in scheme.stages:
        if st[0] == "square":
            y = y * y
        elif st[0] == "purify":
            y = y * (2 - y)
        else:
            y = st[1] * y + st[2] * y**3
    return CompositionValue(y, scheme.cost, flagged)


@dataclass(frozen=True)
class SignError:
    """Sup-norm error on ``[-1, -delta] ∪ [delta, 1]`` and its diagnostics.

    ``alternations`` counts sign changes of ``p(x) - sign(x)`` along the grid
    of ``[delta, 1]``; ``argmax`` is the grid point of the largest error.
    """

    error: float
    argmax: float
    alternations: int


def sign_error(scheme: CompositionScheme, delta, grid_density=10_000) -> SignError:
    """Error of ``scheme`` as a sign approximation on ``[-1,-delta] ∪ [delta,1]``.

    Only ``[delta, 1]`` is sampled: odd (all-cubic) schemes are symmetric,
    and other schemes are measured through their odd extension
    ``sign(x) p(|x|)``, which is how a step approximation on ``[0, 1]``
    becomes a sign approximation. The grid includes both endpoints.
    """
    if not 0 < delta < 1:
        raise ValueError("need 0 < delta < 1")
    x = np.linspace(delta, 1.0, int(grid_density))
    r = eval_composition(scheme, x).values - 1.0
    i = int(np.argmax(np.abs(r)))
    s = np.sign(r)
    s = s[s != 0]
    alt = int(np.sum(s[1:] != s[:-1]))
    return SignError(float(np.abs(r[i])), float(x[i]), alt)
