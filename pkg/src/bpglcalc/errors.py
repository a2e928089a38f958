"""Exception hierarchy shared by all bpglcalc modules."""


class CalculatorError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CalculatorError):
    """An argument is outside the mathematical domain of the operation."""


class NotDivisible(CalculatorError):
    """Exact division by a power of rho failed."""


class CapExceeded(CalculatorError):
    """A rewrite would create a tau generator above the configured index cap."""


class BracketUndefined(CalculatorError):
    """The definedness inequalities of a triple bracket are violated."""


class NotACocycle(CalculatorError):
    """identify_ext1 was fed an element with nonzero differential."""


class NotHomogeneous(CalculatorError):
    """An operation requiring a homogeneous element got a mixed one."""


class FormulaMismatch(CalculatorError):
    """An enumeration disagrees with a closed form; signals a bug, not bad input."""


class InternalError(CalculatorError):
    """An internal consistency check failed; signals a bug, not bad input."""


class WindowTooLarge(CalculatorError):
    """A chart window exceeds the configured class-count cap."""


class ParseError(CalculatorError):
    """Malformed element text."""
