"""Recursive determinant evaluation by splitting at the largest pin.

Pinning phi_m = 0 cuts the quadratic form into a left part on sites below m
and a right part on sites above m, coupled only through the Laplacian term
b_m (phi_{m-1} + phi_{m+1})^2. Writing A for the left system with weights
b_0..b_m, A' for the same system with b_m set to zero, and C' for the right
system b_m..b_n with b_m set to zero,

    det = det(A) det(C') + b_m det(A') det(b_{m+1}..b_n).

When phi_{m-1} is also pinned the coupling vanishes and the determinant is
the product of the two block determinants.
"""

import logging
from functools import lru_cache
from typing import Tuple

import numpy as np

from src.detkit.banded import det_banded
from src.detkit.base import PatternLike, WeightsLike, as_pins, as_weights
from src.models.validation import ValidationError


logger = logging.getLogger(__name__)

SPLIT_CACHE_SIZE = 4096


def _split(b: np.ndarray, pins: Tuple[int, ...]) -> float:
    return _split_cached(b.tobytes(), pins)


@lru_cache(maxsize=SPLIT_CACHE_SIZE)
def _split_cached(raw: bytes, pins: Tuple[int, ...]) -> float:
    b = np.frombuffer(raw, dtype=float)
    n = b.size - 1
    if n - 1 - len(pins) <= 0:
        return 1.0
    if not pins:
        return det_banded(b, allow_zero=True)

    m = pins[-1]
    lower = tuple(p for p in pins if p < m)
    if m == 1 or (lower and lower[-1] == m - 1):
        left = _split(b[:m], tuple(p for p in lower if p < m - 1))
        return left * _split(b[m:], ())

    det_a = _split(b[: m + 1], lower)
    if m == n - 1:
        return det_a

    a_prime = b[: m + 1].copy()
    a_prime[m] = 0.0
    c_prime = b[m:].copy()
    c_prime[0] = 0.0
    return (det_a * _split(c_prime, ())
            + b[m] * _split(a_prime, lower) * _split(b[m + 1:], ()))


def det_split(b: WeightsLike, pattern: PatternLike) -> float:
    """Determinant of the pinned matrix by recursive splitting.

    Args:
        b: Weights b_0..b_n
        pattern: Pinned interior sites; must be nonempty

    Returns:
        The determinant, equal to det_banded(b, pattern)

    Raises:
        ValidationError: If the pattern is empty or out of range
        DeterminantError: If a block factorization breaks down
    """
    b = as_weights(b)
    pins = as_pins(pattern, b.size - 1)
    if not pins:
        raise ValidationError("det_split needs at least one pinned site", "pins")
    return _split(np.ascontiguousarray(b, dtype=float), pins)


def clear_split_cache() -> None:
    """Drop memoized block determinants."""
    _split_cached.cache_clear()
