"""
This module defines the exceptions raised by the nominal reasoning library.

Every error derives from NominalError; the concrete classes also derive from the builtin
exception that describes their situation, so callers that only know about ValueError or
RuntimeError still catch them.
"""

from typing import Optional


class NominalError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(NominalError, ValueError):
    """Raised for undeclared symbols, arity mismatches and clashing symbol declarations."""


class ProblemSyntaxError(NominalError, ValueError):
    """Raised when a problem file cannot be parsed.

    Attributes:
        line: 1-based line of the offending token, if known.
        column: 1-based column of the offending token, if known.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class CapExceeded(NominalError, RuntimeError):
    """Raised when a permutation group closure grows past the configured element budget."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(
            f"group closure exceeded {cap} elements; raise the limit with --max-group-order"
        )


class SpecInvalid(NominalError, ValueError):
    """Raised when a group specification mixes fresh atoms into its fixed-point generators."""


class NotNormalized(NominalError, ValueError):
    """Raised when an operation needs a normalized context."""


class NotReduced(NominalError, ValueError):
    """Raised when a constraint that a simplification rule still applies to is classified."""


class NonGround(NominalError, ValueError):
    """Raised when a ground-term operation receives a term containing variables."""
