"""Exception types shared across the solver modules."""


class NumericalGuardError(ArithmeticError):
    """A numerical safeguard refused to return a value it cannot trust."""


class PrecisionLossError(NumericalGuardError):
    """Alternating series too large to sum in double precision."""


class RangeGuardError(NumericalGuardError, OverflowError):
    """A series term or value left the double-precision range."""


class TruncationError(NumericalGuardError):
    """Series truncation order is too low for the requested accuracy."""


class PoleError(NumericalGuardError, ZeroDivisionError):
    """Division by a series (or function value) that vanishes."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
