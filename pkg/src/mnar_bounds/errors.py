"""Exception types and numeric tolerances shared across the package."""

# Structural checks: normalization, positivity, zero-mass conditioning events.
STRUCTURAL_TOL = 1e-12
# Derived identities such as the observed-data consistency equation.
IDENTITY_TOL = 1e-10


class MnarBoundsError(Exception):
    """Base class for every error raised by this package."""


class InvalidProbability(MnarBoundsError, ValueError):
    pass


class NotNormalized(MnarBoundsError, ValueError):
    pass


class PositivityViolation(MnarBoundsError, ValueError):
    pass


class ZeroConditioningEvent(MnarBoundsError, ValueError):
    pass


class UndefinedContrast(MnarBoundsError, ArithmeticError):
    pass


class ParseError(MnarBoundsError, ValueError):
    pass


class InvariantViolation(MnarBoundsError, AssertionError):
    """A mathematical guarantee failed at runtime; always a bug."""


class InfeasibleParams(UserWarning):
    """Sensitivity parameters fall outside the data-implied feasible region."""
