"""Exception types raised by the factorization and solver routines."""


class ToeplitzError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ToeplitzError, ValueError):
    pass


class DomainError(ToeplitzError, ValueError):
    """A parameter lies outside the domain an operation is defined on."""


class NonPositiveDiagonal(DomainError):
    pass


class Breakdown(ToeplitzError, ArithmeticError):
    """A downdating step could not be carried out.

    Raised when ``|a| <= |b|`` for the pair that defines the hyperbolic
    rotation at some step, which certifies that the matrix being factored
    is not positive definite (in working precision).

    Attributes
    ----------
    step : int or None
        1-based index of the failing step, when known.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class NotPositiveDefinite(Breakdown):
    """Dense Cholesky met a non-positive pivot (``step`` is the 1-based pivot)."""


class ZeroPivot(ToeplitzError, ZeroDivisionError):
    pass


class IllConditioned(ToeplitzError, ArithmeticError):
    """An eigenvalue iteration failed to converge."""


class ZeroSolution(ToeplitzError, ValueError):
    pass


class ZeroTruth(ToeplitzError, ValueError):
    pass
