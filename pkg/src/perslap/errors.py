"""Exception hierarchy shared by every module.

The CLI maps :class:`ParseError` (and plain :class:`InputError`) to exit code 2
and :class:`DomainError` to exit code 1.
"""

from __future__ import annotations


class PerslapError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PerslapError, ValueError):
    """Malformed or inconsistent input (bad shapes, out-of-range indices)."""


class ParseError(InputError):
    """A file could not be parsed; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class DomainError(PerslapError, ValueError):
    """A well-formed request that has no mathematical answer."""


class NumericalDomainError(DomainError):
    """Floating-point evidence that the input is not realizable (e.g. non-embeddable distances)."""


class TorsionWarning(UserWarning):
    """Rational and two-element-field Betti numbers disagree."""
