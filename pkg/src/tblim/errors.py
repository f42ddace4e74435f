"""Exception types shared across the package."""


class TblimError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TblimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BasisMismatchError(TblimError, ValueError):
    """Arithmetic attempted between objects tagged with different bases."""


class PoleError(TblimError, ZeroDivisionError):
    """A trigonometric denominator vanished (or nearly vanished).

    ``factor`` names the offending expression so callers can report which
    denominator collapsed.
    """

    def __init__(self, factor, value=None):
        self.factor = factor
        self.value = value
        msg = f"pole: {factor} vanishes"
        if value is not None:
            msg += f" (|value| = {abs(value):.3e})"
        super().__init__(msg)


class DegeneracyError(TblimError, ArithmeticError):
    """A construction that requires simple spectra or nonzero recurrence
    coefficients hit a degenerate configuration."""


class ConvergenceError(TblimError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class SupportError(DomainError):
    """A signal violates a required support constraint."""
