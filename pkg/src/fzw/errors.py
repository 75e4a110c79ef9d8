"""Exception hierarchy shared by every module."""
from __future__ import annotations


class FzwError(Exception):
    """Base class for all errors raised by the package."""


class ArityError(FzwError):
    """Wire counts do not line up (ill-formed composition or bad shape)."""


class MixedParityError(FzwError):
    """A matrix or state has nonzero entries in both parity classes."""


class OddParityError(FzwError):
    """An even map was required but an odd one was supplied."""


class CapacityError(FzwError):
    """The requested dense object exceeds the configured wire limit."""


class NoMatch(FzwError):
    """A rewrite rule's left-hand side does not occur at the given position."""


class ParseError(FzwError):
    """DSL syntax error with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += "; expected one of: " + ", ".join(sorted(self.expected))
        super().__init__(detail)
