class QuadDTError(Exception):
    """Base class for quaddt errors."""


class InputError(QuadDTError, ValueError):
    """Lane or grid values are unusable (non-finite, empty)."""


class InvalidParameterError(QuadDTError, ValueError):
    """Transform parameters are invalid (alpha = 0, rank mismatch, ...)."""


class NumericalDegeneracyError(QuadDTError, ArithmeticError):
    """An envelope build hit a state exact arithmetic cannot reach."""


class OracleSizeError(QuadDTError, ValueError):
    """Brute-force oracle refused an input above its size cap."""


class LaneError(QuadDTError):
    """A 1D pass failed on one lane of an N-D transform."""

    def __init__(self, axis: int, lane_index: tuple[int, ...], cause: Exception):
        self.axis = axis
        self.lane_index = lane_index
        self.cause = cause
        super().__init__(f"axis {axis} lane {lane_index}: {cause}")


class ParseError(QuadDTError, ValueError):
    """Malformed grid text. Line and column are 1-based."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CountMismatchError(ParseError):
    """Declared extents disagree with the number of values found."""

    def __init__(self, expected: int, found: int, line: int | None = None):
        self.expected = expected
        self.found = found
        super().__init__(f"expected {expected} values, found {found}", line=line)
