"""Exception hierarchy shared by every module."""


class RelPibError(Exception):
    """Base class for all errors raised by this package."""


class RingMismatchError(RelPibError, TypeError):
    """Operands live in different imaginary quadratic rings."""


class DomainError(RelPibError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class InapplicableError(DomainError):
    """A theorem or procedure does not apply to the given parameters."""


class NotASolutionError(DomainError):
    pass


class PrecisionError(RelPibError, ArithmeticError):
    """A ball computation could not certify a decision at the requested precision.

    ``quantity`` names what was being certified so callers (and the CLI) can
    report which comparison ran out of bits.
    """

    def __init__(self, message: str, quantity: str = "", prec: int = 0):
        super().__init__(message)
        self.quantity = quantity
        self.prec = prec


class PrecisionExhausted(PrecisionError):
    """Raised after the adaptive precision schedule hit its cap."""


class ParseError(RelPibError, ValueError):
    pass


class AnomalyError(RelPibError):
    """A computation contradicted a proven statement (a would-be counterexample)."""
