"""Exception types shared across the package."""


class SquaresError(Exception):
    """Base class for all errors raised by this library."""


class ShapeError(SquaresError, ValueError):
    """Input is not a well-formed square matrix."""


class OrderMismatchError(SquaresError, ValueError):
    """Two orders that must agree do not (k*k != n, or mismatched grids)."""


class CapExceededError(SquaresError, ValueError):
    """Requested order exceeds an enforced size cap."""


class InvalidOrderError(SquaresError, ValueError):
    """The requested order admits no square of the requested kind."""


class InvalidLambdaError(SquaresError, ValueError):
    """Cyclic-construction slope violates its validity conditions."""


class EntryRangeError(SquaresError, ValueError):
    """A grid entry lies outside the range required by an operation."""


class ParseError(SquaresError, ValueError):
    """Malformed serialized grid data."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class ValueRangeError(ParseError):
    """Serialized data contains an out-of-range (e.g. negative) value."""


class InconsistencyError(SquaresError, RuntimeError):
    """Direct and identity verification disagree; indicates an internal bug."""
