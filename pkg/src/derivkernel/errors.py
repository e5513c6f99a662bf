"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class belongs to exactly one
of three buckets: parse errors, math-domain errors and plain usage errors.
"""

from __future__ import annotations


class DerivKernelError(Exception):
    """Base class for all library errors."""


class ParseError(DerivKernelError, ValueError):
    """Malformed polynomial or rational-function text."""

    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownVariableError(ParseError):
    """An identifier that is not part of the active variable set."""


class VarSetMismatchError(DerivKernelError, ValueError):
    """Operands live on different variable sets."""


class MissingVariableError(DerivKernelError, KeyError):
    """An evaluation assignment does not cover a variable in use."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else "missing variable"


class MathDomainError(DerivKernelError, ArithmeticError):
    """A mathematically invalid request (bad index, non-monic curve, ...)."""


class InconsistentSpecializationError(MathDomainError):
    """A pinned locus is not preserved by the flow of a derivation."""


class ShapeError(MathDomainError):
    """A change of variables takes a curve outside its family."""


class GradingError(MathDomainError):
    """A weight constraint was requested on a space without a compatible grading."""
