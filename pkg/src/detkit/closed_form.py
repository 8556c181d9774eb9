"""Closed-form determinant of the unpinned matrix.

det B = prod_i b_i * sum_{k=1}^{n} k^2 sum_{i=0}^{n-k} b_i^{-1} b_{i+k}^{-1}

The inner sum over i is the lag-k autocorrelation of the inverse weights, so
the bracket can be evaluated in O(n log n) by FFT correlation.
"""

import logging
import math
from fractions import Fraction
from typing import Union

import numpy as np
from scipy import signal

from src.detkit.base import WeightsLike, as_weights


logger = logging.getLogger(__name__)

FFT_THRESHOLD = 2048
METHODS = ("auto", "direct", "fft")


def _scaled_inverse(b: np.ndarray):
    inv = 1.0 / b
    scale = float(np.max(inv))
    return inv / scale, scale


def _lag_sums_direct(c: np.ndarray) -> np.ndarray:
    n = c.size - 1
    return np.array([np.dot(c[:-k], c[k:]) for k in range(1, n + 1)])


def _lag_sums_fft(c: np.ndarray) -> np.ndarray:
    corr = signal.correlate(c, c, mode="full", method="fft")
    return corr[c.size:]


def _resolve_method(method: str, n: int) -> str:
    if method not in METHODS:
        raise ValueError(f"Unknown bracket method '{method}', expected one of {METHODS}")
    if method == "auto":
        return "fft" if n > FFT_THRESHOLD else "direct"
    return method


def log_bracket_sum(b: WeightsLike, method: str = "auto") -> float:
    """Logarithm of the bracket sum_k k^2 sum_i b_i^{-1} b_{i+k}^{-1}.

    Args:
        b: Weights b_0..b_n with n >= 1
        method: "direct" (O(n^2)), "fft" (O(n log n)) or "auto"

    Returns:
        Log of the bracket; -inf for n = 0
    """
    b = as_weights(b)
    n = b.size - 1
    if n == 0:
        return -math.inf
    c, scale = _scaled_inverse(b)
    lags = _lag_sums_direct(c) if _resolve_method(method, n) == "direct" else _lag_sums_fft(c)
    k = np.arange(1, n + 1, dtype=float)
    total = float(np.dot(k * k, lags))
    return math.log(total) + 2.0 * math.log(scale)


def bracket_sum(b: WeightsLike, method: str = "auto") -> float:
    """The bracket of the closed form in the linear domain."""
    return math.exp(log_bracket_sum(b, method))


def log_det_closed_form(b: WeightsLike, method: str = "auto") -> float:
    """Log-determinant of the unpinned matrix from the closed form.

    Args:
        b: Weights b_0..b_n
        method: Bracket evaluation method

    Returns:
        log det B; 0 for n = 1 where the matrix is empty
    """
    b = as_weights(b)
    n = b.size - 1
    if n <= 1:
        return 0.0
    return float(np.sum(np.log(b))) + log_bracket_sum(b, method)


def _det_exact(b: np.ndarray) -> Fraction:
    weights = [Fraction(float(v)) for v in b]
    n = len(weights) - 1
    inv = [1 / w for w in weights]
    bracket = Fraction(0)
    for k in range(1, n + 1):
        lag = sum((inv[i] * inv[i + k] for i in range(n - k + 1)), Fraction(0))
        bracket += k * k * lag
    product = Fraction(1)
    for w in weights:
        product *= w
    return product * bracket


def det_closed_form(b: WeightsLike, method: str = "auto",
                    exact: bool = False) -> Union[float, Fraction]:
    """Determinant of the unpinned matrix from the closed form.

    For n = 1 the matrix is empty and the determinant is 1. Note that the
    closed form itself gives prod(b) * b_0^{-1} b_1^{-1} = 1 there as well.

    Args:
        b: Weights b_0..b_n
        method: Bracket evaluation method
        exact: Evaluate in rational arithmetic and return a Fraction

    Returns:
        det B
    """
    b = as_weights(b)
    if exact:
        return _det_exact(b) if b.size > 1 else Fraction(1)
    return math.exp(log_det_closed_form(b, method))
