"""Exception hierarchy shared by every evaluator."""


class AperyError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInput(AperyError, ValueError):
    pass


class DomainError(InvalidInput):
    """Argument outside the region where the object is defined or implemented."""


class PoleError(DomainError):
    """Evaluation requested at a pole."""


class UnsupportedOrder(InvalidInput):
    pass


class NonConvergence(AperyError, ArithmeticError):
    """A series or iteration hit its budget before the stopping rule fired."""


# Newton solver failures share the series failure type.
NoConvergence = NonConvergence


class NonFinite(AperyError, ArithmeticError):
    """A NaN or infinity was produced where a finite value is required."""


class RangeViolation(AperyError, ArithmeticError):
    """A solved quantity left the interval it is known to lie in."""
