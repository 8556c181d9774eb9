"""Discrete renewal pinning with a general inter-arrival law.

The homogeneous model with reward e^h per return has free energy f(h), the
root of e^h sum_n K(n) e^{-f n} = 1, and f = 0 for h <= h_c = -log sum_n K(n).
Writing the identity through the deficit sum_n K(n)(1 - e^{-f n}) keeps it
accurate for h close to h_c.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from mpmath import mp
from scipy.optimize import brentq
from scipy.special import zeta

from src.models.validation import ValidationError
from src.renewal.base import BracketingError, FitError, KernelError, PinningKernel


logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4
MAX_FIT_OFFSET = 0.1
MAX_BRACKET_STEPS = 40
MIN_PRECISION = 40


class PowerLawKernel(PinningKernel):
    """Normalized K(n) = n^{-(1+alpha)} / zeta(1+alpha)."""

    def __init__(self, alpha: float):
        super().__init__()
        if not alpha > 0 or not math.isfinite(alpha):
            raise KernelError(f"Power-law kernel needs alpha > 0, got {alpha}")
        self._alpha = float(alpha)
        self._exponent = 1.0 + self._alpha
        self._zeta = float(zeta(self._exponent))

    @property
    def total_mass(self) -> float:
        return 1.0

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def tail_constant(self) -> float:
        return 1.0 / self._zeta

    @property
    def mean(self) -> float:
        if self._alpha <= 1.0:
            return float("inf")
        return float(zeta(self._alpha)) / self._zeta

    def deficit(self, f: float) -> float:
        # 1 - Li_s(e^{-f}) / zeta(s) loses about -log10(f) digits twice over
        digits = max(MIN_PRECISION, 30 + 2 * int(math.ceil(-math.log10(f))))
        with mp.workdps(digits):
            s = mp.mpf(self._exponent)
            value = 1 - mp.polylog(s, mp.exp(-mp.mpf(f))) / mp.zeta(s)
            return float(value)

    def probabilities(self, n_max: int) -> np.ndarray:
        n = np.arange(1, n_max + 1, dtype=float)
        return n ** -self._exponent / self._zeta

    def describe(self) -> str:
        return f"power law alpha={self._alpha:g}"


class GeometricKernel(PinningKernel):
    """K(n) = (1 - q) q^{n-1}."""

    def __init__(self, q: float):
        super().__init__()
        if not 0.0 <= q < 1.0:
            raise KernelError(f"Geometric kernel needs 0 <= q < 1, got {q}")
        self.q = float(q)

    @property
    def total_mass(self) -> float:
        return 1.0

    @property
    def mean(self) -> float:
        return 1.0 / (1.0 - self.q)

    def deficit(self, f: float) -> float:
        return -math.expm1(-f) / (1.0 - self.q * math.exp(-f))

    def probabilities(self, n_max: int) -> np.ndarray:
        return (1.0 - self.q) * self.q ** np.arange(n_max, dtype=float)

    def free_energy_closed_form(self, h: float) -> float:
        """f(h) = log((1 - q) e^h + q) for h > 0."""
        if h <= 0:
            return 0.0
        return math.log1p((1.0 - self.q) * math.expm1(h))

    def describe(self) -> str:
        return f"geometric q={self.q:g}"


class TelescopingKernel(PinningKernel):
    """K(n) = 1 / (n (n + 1)); alpha = 1 with c_K = 1."""

    @property
    def total_mass(self) -> float:
        return 1.0

    @property
    def alpha(self) -> float:
        return 1.0

    @property
    def tail_constant(self) -> float:
        return 1.0

    def deficit(self, f: float) -> float:
        if f > 700.0:
            return 1.0
        if f < 1.0:
            return -math.expm1(f) * math.log(-math.expm1(-f))
        return -math.expm1(f) * math.log1p(-math.exp(-f))

    def probabilities(self, n_max: int) -> np.ndarray:
        n = np.arange(1, n_max + 1, dtype=float)
        return 1.0 / (n * (n + 1.0))

    def describe(self) -> str:
        return "telescoping 1/(n(n+1))"


class TabulatedKernel(PinningKernel):
    """Finitely supported K(1..m) given as an array."""

    def __init__(self, probabilities: Iterable[float], alpha: Optional[float] = None):
        super().__init__()
        values = np.asarray(list(probabilities), dtype=float)
        if values.size == 0 or np.any(values < 0) or not np.all(np.isfinite(values)):
            raise KernelError("Tabulated kernel needs a non-empty nonnegative finite array")
        if values.sum() > 1.0 + 1e-12:
            raise KernelError(f"Tabulated kernel has total mass {values.sum():.6f} > 1")
        if values.sum() == 0:
            raise KernelError("Tabulated kernel has zero mass")
        self._values = values
        self._alpha = alpha
        self._n = np.arange(1, values.size + 1, dtype=float)

    @property
    def total_mass(self) -> float:
        return float(self._values.sum())

    @property
    def alpha(self) -> Optional[float]:
        return self._alpha

    @property
    def mean(self) -> float:
        return float(np.dot(self._n, self._values))

    def deficit(self, f: float) -> float:
        return float(-np.dot(self._values, np.expm1(-f * self._n)))

    def probabilities(self, n_max: int) -> np.ndarray:
        out = np.zeros(n_max)
        count = min(n_max, self._values.size)
        out[:count] = self._values[:count]
        return out


def pinning_free_energy(kernel: PinningKernel, h: float) -> float:
    """Free energy f(h) of the homogeneous renewal pinning model.

    Args:
        kernel: Inter-arrival law
        h: Pinning reward (log scale)

    Returns:
        f(h) >= 0, zero for h <= h_c

    Raises:
        KernelError: If the kernel mass is not in (0, 1]
        BracketingError: If the root cannot be bracketed
    """
    mass = kernel.total_mass
    if not 0.0 < mass <= 1.0 + 1e-12:
        raise KernelError(f"Kernel mass must lie in (0, 1], got {mass}")
    offset = h - kernel.critical_point
    if offset <= 0:
        return 0.0
    target = -mass * math.expm1(-offset)

    f_lo = min(target, 1.0) * 1e-3
    steps = 0
    while kernel.deficit(f_lo) >= target:
        f_lo *= 1e-3
        steps += 1
        if steps > MAX_BRACKET_STEPS:
            raise BracketingError(f"No lower bracket for h={h} ({kernel.describe()})")
    f_hi = 1.0
    steps = 0
    while kernel.deficit(f_hi) <= target:
        f_hi *= 10.0
        steps += 1
        if steps > MAX_BRACKET_STEPS:
            raise BracketingError(f"No upper bracket for h={h} ({kernel.describe()})")

    root = brentq(lambda u: kernel.deficit(math.exp(u)) - target,
                  math.log(f_lo), math.log(f_hi), xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return math.exp(root)


def pinning_curve(kernel: PinningKernel, h_values: Iterable[float]) -> List[Dict[str, float]]:
    """(h, f) rows for a grid of rewards."""
    return [{"h": float(h), "f": pinning_free_energy(kernel, h)} for h in h_values]


@dataclass
class ExponentFit:
    """Log-log regression of f against h - h_c."""
    exponent: float
    exponent_stderr: float
    constant: float
    constant_stderr: float
    delta_h: List[float] = field(default_factory=list)
    free_energy: List[float] = field(default_factory=list)

    @property
    def stderr(self) -> float:
        return self.exponent_stderr

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["stderr"] = self.exponent_stderr
        return data


def exponent_fit(kernel: PinningKernel, h_grid: Iterable[float]) -> ExponentFit:
    """Fit log f = exponent * log(h - h_c) + log constant.

    Args:
        kernel: Inter-arrival law
        h_grid: Rewards in (h_c, h_c + 0.1]

    Returns:
        ExponentFit

    Raises:
        ValidationError: If a reward lies outside the fit window
        FitError: If fewer than four points carry a positive free energy
    """
    h_c = kernel.critical_point
    offsets = np.asarray([h - h_c for h in h_grid], dtype=float)
    if offsets.size and (np.any(offsets <= 0) or np.any(offsets > MAX_FIT_OFFSET + 1e-12)):
        raise ValidationError(f"Rewards must lie in (h_c, h_c + {MAX_FIT_OFFSET}]", "h_grid")
    values = np.array([pinning_free_energy(kernel, h_c + d) for d in offsets])
    valid = values > 0
    if np.count_nonzero(valid) < MIN_FIT_POINTS or np.unique(offsets[valid]).size < MIN_FIT_POINTS:
        raise FitError(f"Exponent fit needs {MIN_FIT_POINTS} distinct points with f > 0")

    coeffs, cov = np.polyfit(np.log(offsets[valid]), np.log(values[valid]), 1, cov=True)
    slope_err = math.sqrt(max(cov[0, 0], 0.0))
    intercept_err = math.sqrt(max(cov[1, 1], 0.0))
    constant = math.exp(coeffs[1])
    logger.info(f"Exponent fit for {kernel.describe()}: {coeffs[0]:.4f} +- {slope_err:.1e}")
    return ExponentFit(exponent=float(coeffs[0]), exponent_stderr=slope_err,
                       constant=constant, constant_stderr=constant * intercept_err,
                       delta_h=offsets[valid].tolist(), free_energy=values[valid].tolist())


@dataclass
class LogCorrectedRatio:
    """f |log dh| / dh and f |log f| / dh at the alpha = 1 boundary case."""
    delta_h: float
    free_energy: float
    plain: float
    self_consistent: float
    expected: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def log_corrected_ratio(kernel: PinningKernel, delta_h: float) -> LogCorrectedRatio:
    """Both log-corrected ratios at h = h_c + delta_h; the limit is 1/c_K.

    The self-consistent form converges much faster than the plain one.
    """
    if not 0.0 < delta_h < 1.0:
        raise ValidationError(f"delta_h must lie in (0, 1), got {delta_h}", "delta_h")
    f = pinning_free_energy(kernel, kernel.critical_point + delta_h)
    constant = kernel.tail_constant
    return LogCorrectedRatio(
        delta_h=delta_h,
        free_energy=f,
        plain=f * abs(math.log(delta_h)) / delta_h,
        self_consistent=f * abs(math.log(f)) / delta_h if f > 0 else 0.0,
        expected=None if constant is None else 1.0 / constant,
    )
