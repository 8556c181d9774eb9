"""Moment generating function of a standard normal charge."""

import math

import numpy as np

from src.core.base import OutOfRangeError
from src.models.validation import ValidationError


MAX_LOG_FLOAT = float(np.log(np.finfo(float).max))


def log_mgf(t: float) -> float:
    """log M(t) = t^2 / 2."""
    if not math.isfinite(t):
        raise ValidationError(f"mgf argument must be finite, got {t}", "t")
    return 0.5 * t * t


def mgf(t: float) -> float:
    """Standard normal moment generating function M(t) = exp(t^2 / 2).

    Args:
        t: Finite real argument

    Returns:
        exp(t^2 / 2)

    Raises:
        OutOfRangeError: If the value overflows a double
    """
    exponent = log_mgf(t)
    if exponent > MAX_LOG_FLOAT:
        raise OutOfRangeError(
            f"M({t}) = exp({exponent:.6g}) exceeds the floating-point range"
        )
    return math.exp(exponent)


def log_mgf_second_derivative(t: float, step: float = 1e-4) -> float:
    """Central second difference of log M, exact up to rounding for the normal law."""
    return (log_mgf(t + step) - 2.0 * log_mgf(t) + log_mgf(t - step)) / (step * step)
