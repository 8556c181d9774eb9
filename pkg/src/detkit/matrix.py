"""The disorder-weighted discrete bilaplacian and its pinned reductions."""

from typing import Tuple

import numpy as np

from src.detkit.base import PatternLike, WeightsLike, as_pins, as_weights


def full_bands(b: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonals of the unpinned matrix indexed by free sites 1..n-1.

    Args:
        b: Weights b_0..b_n; leading axes are batch axes

    Returns:
        (diagonal, first off-diagonal, second off-diagonal) of lengths
        n-1, n-2 and n-3 (clipped at zero)
    """
    diag = b[..., :-2] + 4.0 * b[..., 1:-1] + b[..., 2:]
    off1 = -2.0 * (b[..., 1:-2] + b[..., 2:-1])
    off2 = b[..., 2:-2].copy()
    size = diag.shape[-1]
    return diag, off1[..., : max(size - 1, 0)], off2[..., : max(size - 2, 0)]


def reduced_bands(b: WeightsLike, pattern: PatternLike = None,
                  allow_zero: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonals of the matrix with pinned rows and columns deleted.

    Deleting a row of a pentadiagonal matrix keeps the bandwidth at two:
    sites two apart become neighbours and sites three apart have no entry.
    """
    b = as_weights(b, allow_zero=allow_zero)
    n = b.size - 1
    pins = as_pins(pattern, n)
    diag, off1, off2 = full_bands(b)
    if not pins:
        return diag, off1, off2

    size = diag.size
    keep = np.setdiff1d(np.arange(1, n), np.asarray(pins, dtype=int))
    idx = keep - 1
    pad1 = np.zeros(size)
    pad1[: off1.size] = off1
    pad2 = np.zeros(size)
    pad2[: off2.size] = off2

    gap1 = np.diff(keep)
    first = np.where(gap1 == 1, pad1[idx[:-1]], np.where(gap1 == 2, pad2[idx[:-1]], 0.0))
    gap2 = keep[2:] - keep[:-2]
    second = np.where(gap2 == 2, pad2[idx[:-2]], 0.0)
    return diag[idx], first, second


def build_matrix(b: WeightsLike, pattern: PatternLike = None) -> np.ndarray:
    """Dense symmetric matrix of the quadratic form with pins deleted.

    Args:
        b: Weights b_0..b_n
        pattern: Pinned interior sites

    Returns:
        (n-1-r) x (n-1-r) matrix; the empty matrix when no free site remains

    Raises:
        ValidationError: If a pin is out of range
    """
    b = as_weights(b)
    n = b.size - 1
    pins = as_pins(pattern, n)
    diag, off1, off2 = full_bands(b)
    size = diag.size
    if size == 0:
        return np.zeros((0, 0))
    matrix = np.diag(diag)
    if size > 1:
        matrix += np.diag(off1, 1) + np.diag(off1, -1)
    if size > 2:
        matrix += np.diag(off2, 2) + np.diag(off2, -2)
    if pins:
        drop = np.asarray(pins, dtype=int) - 1
        matrix = np.delete(np.delete(matrix, drop, axis=0), drop, axis=1)
    return matrix


def bandwidth(matrix: np.ndarray, atol: float = 0.0) -> int:
    """Largest |i - j| with a nonzero entry."""
    rows, cols = np.nonzero(np.abs(matrix) > atol)
    if rows.size == 0:
        return 0
    return int(np.max(np.abs(rows - cols)))
