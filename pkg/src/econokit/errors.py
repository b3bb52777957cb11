"""Exception hierarchy shared by every econokit module."""

from __future__ import annotations


class EconokitError(Exception):
    """Base class for all errors raised by econokit."""


class DataError(EconokitError):
    """Input data violates a structural requirement (duplicates, empty file, ...)."""


class ParseError(DataError):
    """A row of an input file could not be parsed."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f"{':' if where else ''}line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class CoverageError(DataError):
    """A series does not cover the dates an operation needs."""

    def __init__(self, message: str, missing: tuple | list = ()):
        self.missing = tuple(missing)
        super().__init__(message)


class DomainError(EconokitError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class InsufficientDataError(EconokitError):
    """Too few observations for the requested estimation."""


class SingularityError(EconokitError, ArithmeticError):
    """Design matrix or covariance matrix is numerically singular."""


class DegenerateInputError(EconokitError):
    """Input is degenerate (e.g. constant series) for the requested statistic."""


class ConfigError(EconokitError):
    """Invalid configuration value."""
