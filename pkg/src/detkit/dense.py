"""Dense LU oracle for the pinned determinants."""

import math

import numpy as np
from scipy import linalg

from src.detkit.base import PatternLike, WeightsLike
from src.detkit.matrix import build_matrix


def logdet_dense(b: WeightsLike, pattern: PatternLike = None) -> float:
    """Log-determinant of build_matrix(b, pattern) by LU with partial pivoting.

    Raises:
        ValueError: If the determinant is not positive
    """
    matrix = build_matrix(b, pattern)
    if matrix.size == 0:
        return 0.0
    lu, piv = linalg.lu_factor(matrix)
    diag = np.diag(lu)
    swaps = int(np.sum(piv != np.arange(piv.size)))
    sign = (-1) ** swaps * int(np.prod(np.sign(diag)))
    if sign <= 0:
        raise ValueError("Dense determinant is not positive")
    return float(np.sum(np.log(np.abs(diag))))


def det_dense(b: WeightsLike, pattern: PatternLike = None) -> float:
    """Determinant of build_matrix(b, pattern); 1 for the empty matrix."""
    return math.exp(logdet_dense(b, pattern))
