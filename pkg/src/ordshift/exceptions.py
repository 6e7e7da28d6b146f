"""Exception types raised across the package."""


class OrdshiftError(Exception):
    """Base class for all package errors."""


class InvalidInputError(OrdshiftError, ValueError):
    """Non-finite or out-of-range numeric input."""


class ThresholdOrderError(OrdshiftError):
    """Cumulative predictors are not nondecreasing.

    ``index`` is the 1-based threshold r with eta_r > eta_{r+1}.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"thresholds out of order at index {index}")


class SpecError(OrdshiftError, ValueError):
    """Model specification is invalid or inconsistent with the data."""


class DataError(OrdshiftError, ValueError):
    """Input data violates the documented format."""


class FormulaError(OrdshiftError, ValueError):
    """Formula text could not be parsed; ``position`` is a 0-based offset."""

    def __init__(self, message, position=0):
        self.position = position
        super().__init__(f"{message} (position {position})")


class StartError(OrdshiftError):
    """Supplied starting values are infeasible."""


class NestingError(OrdshiftError, ValueError):
    """Likelihood-ratio inputs are not nested (or not converged)."""


class ZeroProbabilityWarning(UserWarning):
    """An observed response category had probability at the clamp floor."""


class SeparationWarning(UserWarning):
    """Coefficients diverged beyond the link scale bound (quasi-separation)."""
