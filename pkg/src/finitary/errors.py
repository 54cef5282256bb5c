"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FinitaryError(Exception):
    """Base class for every error raised by this package."""


class ParseError(FinitaryError, ValueError):
    """Malformed input text. Carries a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(FinitaryError, ValueError):
    """Structurally well-formed input that violates a model invariant."""


class NotFinitaryError(FinitaryError, ValueError):
    """An operation that needs a finitary automaton got one with a cycle."""


class LimitExceeded(FinitaryError):
    """A size guard (decompression limit, oracle guard) was exceeded."""
