"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """A dense factorization or iteration failed to converge."""


class NotSPDError(ValueError):
    """Input was expected to be symmetric (Hermitian) positive definite."""


class NotPSDError(ValueError):
    """Input was expected to be positive semidefinite."""


class RankDeficientError(ValueError):
    """A matrix that must have full rank is (numerically) rank deficient.

    ``alpha`` carries the injectivity diagnostic (squared smallest singular
    value of the sketched basis) when the error comes from a sketch.
    """

    def __init__(self, msg, alpha=None):
        super().__init__(msg)
        self.alpha = alpha


class BudgetExceededError(ValueError):
    """An exhaustive search would exceed its enumeration budget."""
