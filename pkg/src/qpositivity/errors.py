"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class QPositivityError(Exception):
    """Base class for all errors raised by qpositivity."""


class NonFinite(QPositivityError, ValueError):
    """A NaN or infinite value reached a kernel, as input or as an intermediate."""


class DomainViolation(QPositivityError, ValueError):
    """A parameter lies outside the hypothesis domain of the requested object."""


class TruncationExceeded(QPositivityError):
    """A series or product needed more terms than the policy allows."""


class PoleAtB(QPositivityError, ZeroDivisionError):
    """A denominator factor (b;q)_n of a basic hypergeometric series vanishes."""


class PoleAtNonpositiveInteger(QPositivityError, ZeroDivisionError):
    """The q-Gamma function was evaluated at one of its poles."""


class ZeroArgument(QPositivityError, ValueError):
    """The theta series was asked for z = 0, where negative powers blow up."""


class BadTau(QPositivityError, ValueError):
    """The modular parameter tau is not in the upper half-plane."""


class DimMismatch(QPositivityError, ValueError):
    """Two matrices that must share a dimension do not."""


class NumericalFailure(QPositivityError):
    """An iterative linear-algebra routine failed to converge."""


class CutoffInsufficient(QPositivityError):
    """The truncated integration window leaves too much mass in the tails."""

    def __init__(self, message: str, suggested_cutoff: float):
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff
