"""Exception types shared across the package."""


class FlowsumError(Exception):
    """Base class for all library errors."""


class ParseError(FlowsumError, ValueError):
    """Malformed input record; carries the 1-based line number when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        super().__init__(where + message)


class ValidationError(FlowsumError, ValueError):
    """Input violates a structural invariant (negative weight, dangling id, ...)."""


class UnknownNodeError(FlowsumError, LookupError):
    """A node id is not present in the graph."""


class DimensionError(FlowsumError, ValueError):
    """Shape or order mismatch between operands."""


class NumericError(FlowsumError, ArithmeticError):
    """A non-finite value was produced during iteration."""


class SizeGuardError(FlowsumError, ValueError):
    """Exhaustive computation refused: input exceeds the tractability guard."""
