"""Exception hierarchy shared by all modules."""


class GKdVError(Exception):
    """Base class for every error raised by the package."""


class InputError(GKdVError, ValueError):
    """Bad user input: parameters, forms or domains outside a contract."""


class NumericalError(GKdVError, ArithmeticError):
    """A computation left the real, finite regime."""


# model
class DomainError(InputError):
    pass


class UnsupportedDampingForm(InputError):
    pass


class NjEqualsOne(InputError):
    pass


class UnrepresentableGauge(InputError):
    pass


class RangeError(InputError):
    pass


# classify
class NotDilatation(InputError):
    pass


# reduce
class UnsupportedGenerator(InputError):
    pass


class UnknownCase(InputError):
    pass


class IncompatibleBoundaryExponent(InputError):
    pass


class UnsupportedClass(InputError):
    pass


class BadDomain(InputError):
    pass


class BadParameters(InputError):
    pass


# fdsolver / oracle / exact
class BadGrid(InputError):
    pass


class NonNestedGrids(InputError):
    pass


class GridMismatch(InputError):
    pass


class NegativeBase(NumericalError):
    """Real power of a non-positive base with a non-integer exponent."""


class BlowUp(NumericalError):
    def __init__(self, message, omega=None, magnitude=None):
        super().__init__(message)
        self.omega = omega
        self.magnitude = magnitude


class Singularity(NumericalError):
    pass


# reconstruct
class OmegaOutOfRange(InputError):
    def __init__(self, message, x=None, t=None, omega=None):
        super().__init__(message)
        self.x = x
        self.t = t
        self.omega = omega


class BadTimeDomain(InputError):
    pass


class GridTooSmall(InputError):
    pass


class NotConverged(NumericalError):
    """A solve needed by a larger computation did not converge."""

    def __init__(self, message, outcome=None):
        super().__init__(message)
        self.outcome = outcome
