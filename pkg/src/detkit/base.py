"""Errors and input coercion shared by the determinant kernels."""

from typing import Iterable, Optional, Tuple, Union
import logging

import numpy as np

from src.models.params import PinnedPattern, WeightSeq
from src.models.validation import NumericalError, validate_pins, validate_weights


logger = logging.getLogger(__name__)

WeightsLike = Union[WeightSeq, np.ndarray, Iterable[float]]
PatternLike = Union[PinnedPattern, Iterable[int], None]


class DeterminantError(NumericalError):
    """Exception raised when a factorization meets a non-positive pivot."""

    def __init__(self, message: str, operation: str = "ldl",
                 error_code: str = "DETERMINANT_ERROR"):
        super().__init__(message, operation, error_code)


def as_weights(b: WeightsLike, allow_zero: bool = False) -> np.ndarray:
    """Coerce a weight sequence to a validated float array."""
    if isinstance(b, WeightSeq):
        return b.b
    return validate_weights(b, allow_zero=allow_zero)


def as_pins(pattern: PatternLike, n: int) -> Tuple[int, ...]:
    """Coerce a pinned pattern to a sorted tuple checked against size n."""
    if pattern is None:
        return ()
    pins = pattern.pins if isinstance(pattern, PinnedPattern) else tuple(pattern)
    return validate_pins(pins, n)
