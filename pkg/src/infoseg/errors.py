"""Exception hierarchy.

``ValidationError`` (and subclasses) mark bad input data or configuration;
the CLI maps them to exit code 1.  Anything else escaping a command is an
internal failure and maps to exit code 2.
"""

from __future__ import annotations


class InfosegError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(InfosegError):
    """Input data, configuration, or arguments violate a documented contract."""


class ParseError(ValidationError):
    """A file could not be parsed; carries the location of the first error."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += path
        if line is not None:
            prefix += f":{line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class InconsistentObservationsError(ValidationError):
    """A union-reach table cannot come from any population; names the offending subset."""

    def __init__(self, message: str, *, group: str, subset: frozenset[str]):
        self.group = group
        self.subset = subset
        super().__init__(message)


class UndefinedMeasureError(InfosegError):
    """A measure is degenerate on this input (for example a zero denominator).

    Deliberately not a ValidationError: the input is well formed, the score
    simply does not exist.  Batch evaluation records it as a row-level
    outcome instead of aborting.
    """
