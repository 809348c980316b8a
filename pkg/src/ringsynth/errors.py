"""Exception types shared across the package."""

from __future__ import annotations


class RingSynthError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(RingSynthError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class TableFormatError(RingSynthError, ValueError):
    """A tabulated target file or point list is malformed."""


class SingularSystemError(RingSynthError, RuntimeError):
    """The design matrix is numerically rank deficient.

    Carries the offending column so callers can report which ring (or the
    center element) makes the system unsolvable.
    """

    def __init__(self, message: str, column_index: int, column_label: str):
        super().__init__(message)
        self.column_index = column_index
        self.column_label = column_label


class DegeneratePatternError(RingSynthError, ValueError):
    """A pattern is identically zero and cannot be peak-normalized."""


class ConfigError(RingSynthError, ValueError):
    """A synthesis config document failed validation.

    ``problems`` holds one human-readable message per offending field.
    """

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = list(problems)
