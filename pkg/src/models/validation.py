"""Validation helpers and the shared exception roots."""

import math
from typing import Iterable, Sequence

import numpy as np


class ValidationError(Exception):
    """Exception raised when inputs violate a documented precondition."""

    def __init__(self, message: str, field: str = "",
                 error_code: str = "VALIDATION_ERROR"):
        self.message = message
        self.field = field
        self.error_code = error_code
        super().__init__(self.message)


class NumericalError(Exception):
    """Exception raised when a numerical precondition fails at run time."""

    def __init__(self, message: str, operation: str = "",
                 error_code: str = "NUMERICAL_ERROR"):
        self.message = message
        self.operation = operation
        self.error_code = error_code
        super().__init__(self.message)


MAX_SEED = 2 ** 64


def validate_nonnegative(value: float, name: str) -> bool:
    """Validate that a real parameter is finite and nonnegative.

    Args:
        value: Parameter value
        name: Parameter name used in the error message

    Returns:
        True if valid

    Raises:
        ValidationError: If the value is negative or not finite
    """
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}", name)
    if value < 0:
        raise ValidationError(f"{name} must be nonnegative, got {value}", name)
    return True


def validate_positive(value: float, name: str) -> bool:
    """Validate that a real parameter is finite and strictly positive."""
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be positive, got {value}", name)
    return True


def validate_size(n: int, minimum: int = 1, name: str = "n") -> bool:
    """Validate an integer system size.

    Args:
        n: System size
        minimum: Smallest admissible value
        name: Parameter name used in the error message

    Returns:
        True if valid

    Raises:
        ValidationError: If n is not an integer or is below the minimum
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ValidationError(f"{name} must be an integer, got {type(n).__name__}", name)
    if n < minimum:
        raise ValidationError(f"{name} must be at least {minimum}, got {n}", name)
    return True


def validate_seed(seed: int) -> bool:
    """Validate a 64-bit seed."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValidationError(f"Seed must be an integer, got {type(seed).__name__}", "seed")
    if seed < 0 or seed >= MAX_SEED:
        raise ValidationError(f"Seed must lie in [0, 2^64), got {seed}", "seed")
    return True


def validate_weights(b: Sequence[float], allow_zero: bool = False) -> np.ndarray:
    """Validate a weight sequence and return it as a float array.

    Args:
        b: Weights b_0..b_n
        allow_zero: Accept zero entries (used by the split recursion)

    Returns:
        Weights as a one-dimensional float array

    Raises:
        ValidationError: If the sequence is empty, non-finite or not positive
    """
    arr = np.asarray(b, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("Weights must be a non-empty one-dimensional sequence", "b")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("Weights must be finite", "b")
    if allow_zero:
        if np.any(arr < 0):
            raise ValidationError("Weights must be nonnegative", "b")
    elif np.any(arr <= 0):
        raise ValidationError("Weights must be strictly positive", "b")
    return arr


def validate_pins(pins: Iterable[int], n: int) -> tuple:
    """Validate a pinned pattern against a lattice of size n.

    Args:
        pins: Pinned interior sites
        n: Lattice size (free sites are 1..n-1)

    Returns:
        Sorted tuple of distinct pinned sites

    Raises:
        ValidationError: If a pin lies outside 1..n-1
    """
    result = tuple(sorted(set(int(p) for p in pins)))
    for site in result:
        if site < 1 or site > n - 1:
            raise ValidationError(
                f"Pinned site {site} outside interior range 1..{n - 1}", "pins"
            )
    return result
