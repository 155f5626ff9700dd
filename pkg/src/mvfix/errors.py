"""Exception types shared across the package."""


class MvfixError(Exception):
    """Base class for all library-raised errors."""


class DomainError(MvfixError):
    """A point or set is not a member of the space it is used with."""


class InputError(MvfixError):
    """Malformed runtime input (bad sequence, start point, construction data)."""


class EvaluationError(MvfixError):
    """Expression evaluation failed, e.g. division by zero."""


class UnsupportedCombinationError(MvfixError):
    """The requested operation is not decidable for this combination of kinds."""


class ParseError(MvfixError):
    """Scenario or expression text could not be parsed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}: " if column is None else f"line {line}, column {column}: "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)
