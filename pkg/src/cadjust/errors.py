"""Exception hierarchy shared by every cadjust module."""


class CadjustError(Exception):
    """Base class for all library errors."""


class GraphSyntaxError(CadjustError, ValueError):
    """Malformed graph text. Carries a 1-based line and column."""

    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class GraphValidationError(CadjustError, ValueError):
    """A graph violates the structural invariants of its declared class."""


class QueryError(CadjustError, ValueError):
    """Unknown node names or node sets that should be disjoint but overlap."""


class PreconditionError(CadjustError, ValueError):
    """An operation was called outside the setting it is defined for.

    ``name`` is a short machine-readable tag for the failed precondition.
    """

    def __init__(self, name, message):
        self.name = name
        super().__init__(message)


class EnumerationCapError(CadjustError):
    """Too many undirected edges to enumerate the represented DAGs."""


class SingularBlockError(CadjustError, ArithmeticError):
    """A Gaussian conditioning block is singular beyond regularization."""
