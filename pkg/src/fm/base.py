"""Errors raised by the fractional-moment certifier."""

from src.models.validation import ValidationError


class ParameterError(ValidationError):
    """Exception raised when certifier parameters leave their admissible range."""

    def __init__(self, message: str, field: str = "params",
                 error_code: str = "PARAMETER_ERROR"):
        super().__init__(message, field, error_code)
