"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`AbelianCohError`.  The CLI maps :class:`PreconditionError` and its
subclasses to exit code 2.
"""

from __future__ import annotations


class AbelianCohError(Exception):
    """Base class for library errors."""


class InvalidArgumentError(AbelianCohError, ValueError):
    """Mismatched descriptors, shapes or out-of-range parameters."""


class ParseError(AbelianCohError):
    """Malformed JSON/TOML input.  ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(AbelianCohError):
    """An operation was called outside the regime it is defined for."""


class ConstantFunctionError(PreconditionError):
    """The measure is the Dirac mass at the trivial character (phi == 1)."""


class WindowTooSmallError(PreconditionError):
    """A requested group element lies outside the stored window."""


class NotPositiveDefiniteError(PreconditionError):
    def __init__(self, message: str, verdict=None):
        self.verdict = verdict
        super().__init__(message)


class InconsistentInputError(PreconditionError):
    """Fejer density estimate carries too much negative mass."""


class NoGapError(PreconditionError):
    """The trivial character touches the numerical support."""


class WrongRegimeError(PreconditionError):
    """Shell construction requested although the support has a gap."""


class ResolutionError(PreconditionError):
    """The grid cannot resolve the requested number of shells."""

    def __init__(self, message: str, usable: int):
        self.usable = usable
        super().__init__(message)
