"""Symmetric pentadiagonal LDL^T determinants in O(n)."""

import logging
import math

import numpy as np

from src.config import DEFAULT_PIVOT_FLOOR
from src.detkit.base import DeterminantError, PatternLike, WeightsLike, as_weights
from src.detkit.matrix import full_bands, reduced_bands
from src.models.validation import ValidationError


logger = logging.getLogger(__name__)


def ldl_logdet(diag: np.ndarray, off1: np.ndarray, off2: np.ndarray,
               pivot_floor: float = DEFAULT_PIVOT_FLOOR) -> np.ndarray:
    """Log-determinant of symmetric pentadiagonal matrices by LDL^T.

    Leading axes are batch axes; the last axis runs along the band.
    No pivoting is performed: positive definiteness guarantees positive pivots.

    Args:
        diag: Diagonal, shape (..., N)
        off1: First off-diagonal, shape (..., N-1)
        off2: Second off-diagonal, shape (..., N-2)
        pivot_floor: Smallest admissible pivot

    Returns:
        Sum of log pivots, shape (...)

    Raises:
        DeterminantError: If a pivot falls to or below pivot_floor
    """
    diag = np.asarray(diag, dtype=float)
    size = diag.shape[-1]
    batch = diag.shape[:-1]
    if size == 0:
        return np.zeros(batch)

    d = np.empty_like(diag)
    l1 = np.zeros_like(diag)
    l2 = np.zeros_like(diag)
    for i in range(size):
        pivot = diag[..., i].copy()
        if i >= 1:
            pivot -= l1[..., i - 1] ** 2 * d[..., i - 1]
        if i >= 2:
            pivot -= l2[..., i - 2] ** 2 * d[..., i - 2]
        if np.any(pivot <= pivot_floor):
            worst = float(np.min(pivot))
            raise DeterminantError(
                f"Non-positive pivot {worst:.3e} at band position {i} of {size}"
            )
        d[..., i] = pivot
        if i + 1 < size:
            numerator = off1[..., i]
            if i >= 1:
                numerator = numerator - l2[..., i - 1] * l1[..., i - 1] * d[..., i - 1]
            l1[..., i] = numerator / pivot
        if i + 2 < size:
            l2[..., i] = off2[..., i] / pivot
    return np.sum(np.log(d), axis=-1)


def logdet_banded(b: WeightsLike, pattern: PatternLike = None,
                  allow_zero: bool = False) -> float:
    """Log-determinant of the pinned matrix; 0 for the empty matrix."""
    diag, off1, off2 = reduced_bands(b, pattern, allow_zero=allow_zero)
    return float(ldl_logdet(diag, off1, off2))


def det_banded(b: WeightsLike, pattern: PatternLike = None,
               allow_zero: bool = False) -> float:
    """Determinant of build_matrix(b, pattern) through the banded factorization.

    Args:
        b: Weights b_0..b_n
        pattern: Pinned interior sites
        allow_zero: Accept zero weights (split recursion only)

    Returns:
        Positive determinant; 1 for the empty matrix

    Raises:
        DeterminantError: On a non-positive pivot
    """
    return math.exp(logdet_banded(b, pattern, allow_zero=allow_zero))


def logdet_banded_batch(b, pinned: np.ndarray,
                        pivot_floor: float = DEFAULT_PIVOT_FLOOR) -> np.ndarray:
    """Log-determinants for a batch of pin masks or weight sequences.

    A pinned row and column are replaced by the unit vector, which leaves the
    determinant equal to that of the deleted matrix and keeps the band intact.

    Args:
        b: Weights b_0..b_n, or an array (batch, n+1) of weight sequences
        pinned: Boolean mask over free sites 1..n-1, shape (n-1,) or (batch, n-1)

    Returns:
        Log-determinants, shape (batch,)
    """
    b = np.asarray(b, dtype=float)
    if b.ndim == 1:
        b = as_weights(b)
    elif not np.all(b > 0):
        raise DeterminantError("Batched weights must be strictly positive")
    diag, off1, off2 = full_bands(b)
    pinned = np.asarray(pinned, dtype=bool)
    if pinned.shape[-1] != diag.shape[-1]:
        raise ValidationError(
            f"Pin mask width {pinned.shape[-1]} does not match {diag.shape[-1]} free sites", "pinned"
        )
    diag_b = np.where(pinned, 1.0, diag)
    off1_b = np.where(pinned[..., :-1] | pinned[..., 1:], 0.0, off1)
    off2_b = np.where(pinned[..., :-2] | pinned[..., 2:], 0.0, off2)
    return ldl_logdet(diag_b, off1_b, off2_b, pivot_floor)
