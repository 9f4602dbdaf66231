"""Exception types raised across the package."""


class NessError(Exception):
    """Base class for all package errors."""


class ValidationError(NessError, ValueError):
    """Rejected parameter set."""


class UnstableCoupling(ValidationError):
    pass


class Overdamped(ValidationError):
    pass


class CutoffTooLow(ValidationError):
    pass


class NonPositive(ValidationError):
    pass


class UnequalTemperatures(ValidationError):
    pass


class NumericalError(NessError, ArithmeticError):
    """A numerical procedure failed to meet its contract."""


class QuadratureFailure(NumericalError):
    pass


class GridTooCoarse(NumericalError):
    pass


class InconsistentEigenvalues(NumericalError):
    pass


class NoRoot(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass


class NotEntangledAtZeroT(NumericalError):
    pass


class RegimeWarning(UserWarning):
    """A closed-form expression is being used outside its stated validity range."""
