"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ColorCtrlError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ColorCtrlError, ValueError):
    """Raised for malformed or non-canonical pattern documents."""


class DimensionError(ColorCtrlError, ValueError):
    """Raised when matrix shapes are inconsistent with an operation."""


class AssignmentError(ColorCtrlError, ValueError):
    """Raised when a color assignment is incomplete or assigns 0 to a star color."""


class BudgetExceeded(ColorCtrlError):
    """Raised when an enumeration or search outgrows its configured budget.

    This never means "the answer is no"; it means the question was not settled.
    """


class WitnessNotFound(BudgetExceeded):
    """A randomized witness search spent its trial budget without success."""

    def __init__(self, message: str, trials: int) -> None:
        super().__init__(message)
        self.trials = trials
