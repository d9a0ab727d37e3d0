# coding: utf-8
"""Error hierarchy shared by every Schlice package.

Library code raises subclasses of SchliceError; the command-line front end
maps any of them to exit status 2 with a one-line diagnostic.

Classification operations (linearity reports, path validation, slice
verdicts) return result objects instead of raising.
"""

from typing import Optional


class SchliceError(Exception):
    """Base class for all analysis errors."""


class SchemaSyntaxError(SchliceError):
    """Raised when schema source text does not match the grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ArityConflictError(SchliceError):
    """Raised when one symbol is used with two different arities."""


class SymbolClashError(SchliceError):
    """Raised when a name is used in two symbol namespaces."""


class NonLinearSchemaError(SchliceError):
    """Raised when an operation requiring a linear schema gets a non-linear one."""


class PathSyntaxError(SchliceError):
    """Raised when path text names an unknown token."""


class InvalidPathError(SchliceError):
    """Raised when a letter sequence is not a path through the schema."""

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message)
        self.position = position


class NotAQuotientError(SchliceError):
    """Raised when a candidate slice is not a quotient of the sliced schema."""


class InvalidCriterionError(SchliceError):
    """Raised when a slicing criterion violates its preconditions."""


class SearchBudgetExceeded(SchliceError):
    """Raised when a lattice search would exceed the configured site budget."""


class CnfFormatError(SchliceError):
    """Raised for malformed 3-CNF input."""


class SatBudgetExceeded(SchliceError):
    """Raised when brute-force SAT is asked for too many variables."""
