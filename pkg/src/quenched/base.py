"""Errors raised by the grid transfer operator and the disorder estimators."""

from src.models.validation import NumericalError


class GridInadequacyError(NumericalError):
    """Exception raised when the grid radius truncates a visible share of the mass.

    required_radius is the radius that the caller should retry with.
    """

    def __init__(self, message: str, required_radius: float, operation: str = "transfer_audit",
                 error_code: str = "GRID_INADEQUATE"):
        super().__init__(message, operation, error_code)
        self.required_radius = required_radius


class BisectionError(NumericalError):
    """Exception raised when a bisection bracket shows no sign change."""

    def __init__(self, message: str, operation: str = "bisect",
                 error_code: str = "BISECTION_ERROR"):
        super().__init__(message, operation, error_code)
