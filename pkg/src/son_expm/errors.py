"""Exception hierarchy shared by all modules."""


class SonExpmError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SonExpmError, ValueError):
    """Argument outside the supported domain (bad n, index, odd size...)."""


class ValidationError(DomainError):
    """Input matrix or vector fails a structural check."""


class DegenerateInputError(DomainError):
    """Zero algebra element where a normalized direction is required."""


class InvariantViolationError(SonExpmError, ValueError):
    """Invariants lie outside the region admitted by antisymmetric matrices."""


class NumericalFailureError(SonExpmError, ArithmeticError):
    """A closed-form solver failed its own residual checks."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
