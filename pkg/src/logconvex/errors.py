"""Exception hierarchy shared by the numerical modules and the CLI."""


class LogConvexError(Exception):
    """Base class for all package errors."""


class DomainError(LogConvexError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConsistencyError(LogConvexError, ArithmeticError):
    """Two independent evaluation routes disagree beyond tolerance."""


class AccuracyError(LogConvexError, ArithmeticError):
    """A quadrature did not reach its tolerance within the iteration budget.

    The best available estimate is kept on ``estimate``.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class BracketError(LogConvexError, ValueError):
    """The supplied interval does not bracket a sign change."""


class RegimeError(LogConvexError, ValueError):
    """A proof quantity was requested outside the regime where it is defined."""
