"""Exception hierarchy shared by every module."""


class EinsteinSpError(Exception):
    """Base class for all errors raised by this package."""


class DivByZero(EinsteinSpError, ZeroDivisionError):
    pass


class ContextError(EinsteinSpError, ValueError):
    """Polynomials from different variable contexts were combined."""


class EvalError(EinsteinSpError, KeyError):
    pass


class ParseError(EinsteinSpError, ValueError):
    pass


class UnsupportedDenominator(EinsteinSpError, ValueError):
    pass


class ZeroPolyError(EinsteinSpError, ValueError):
    pass


class EndpointRoot(EinsteinSpError, ValueError):
    """An interval endpoint is itself a root; perturb it and retry."""


class InvalidInterval(EinsteinSpError, ValueError):
    pass


class RemainderError(EinsteinSpError, ArithmeticError):
    """Exact division left a nonzero remainder."""


class BudgetExceeded(EinsteinSpError, RuntimeError):
    pass


class NotZeroDimensional(EinsteinSpError, ValueError):
    pass


class SpecError(EinsteinSpError, ValueError):
    """Invalid fibration parameters."""


class DomainError(EinsteinSpError, ValueError):
    """A metric coordinate is zero or not positive."""


class UncertifiedSolution(EinsteinSpError, RuntimeError):
    pass
