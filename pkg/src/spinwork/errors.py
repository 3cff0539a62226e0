"""Exception types raised by the package."""


class SpinWorkError(Exception):
    """Base class for all package errors."""


class PoleError(SpinWorkError, ValueError):
    """A special function was evaluated at one of its poles."""


class UnsupportedSpectrum(SpinWorkError, ValueError):
    """The requested quantity is not available for this spectral density."""


class NotUnitary(SpinWorkError, ValueError):
    """A pulse matrix failed the unitarity check."""


class ParseError(SpinWorkError, ValueError):
    """A pulse or configuration string could not be parsed."""


class InvalidInput(SpinWorkError, ValueError):
    """A physical parameter is outside its allowed range."""


class DomainError(InvalidInput):
    """A time or pulse separation is negative (or zero where forbidden)."""


class DegenerateTemperatures(SpinWorkError, ArithmeticError):
    """Work was extracted although bath and spin temperatures coincide."""


class QuadratureNotConverged(SpinWorkError, ArithmeticError):
    """Node doubling did not reach the requested tolerance."""


class CutoffTooSmall(SpinWorkError, ValueError):
    """Fock truncation leaves too much thermal weight outside the basis."""


class DimensionTooLarge(SpinWorkError, MemoryError):
    """The dense Hilbert space would exceed the configured size limit."""


class RestrictionViolated(SpinWorkError, AssertionError):
    """A second-law restriction or the Carnot bound failed in a sweep."""
