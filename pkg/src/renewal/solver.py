"""Free energy and critical point from the renewal generating function.

With a_1 = eps Ž_{0,1} x, a_2 = 0 and a_n = eps^2 Ž_{0,n} x^n, the free energy
is f = -log x where sum_n a_n(x) = 1, and f = 0 when the series at x = 1 stays
below one. Beyond the table the terms follow the fitted tail C x^n / n^2,
summed in closed form with the dilogarithm.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from scipy.special import spence

from src.config import RenewalConfig, get_default_renewal_config
from src.models.results import METHOD_RENEWAL, CriticalPointEstimate, FreeEnergyEstimate
from src.models.validation import ValidationError, validate_positive
from src.renewal.base import BracketingError, RenewalError
from src.renewal.table import RenewalTable


logger = logging.getLogger(__name__)

ZETA_2 = math.pi ** 2 / 6.0
MAX_BRACKET_STEPS = 60
CRITICAL_RTOL = 1e-13
DERIVATIVE_STEP = 1e-4


def _fitted(table: RenewalTable, eps: Optional[float]) -> RenewalTable:
    if eps is not None and table.eps != eps:
        return table.at(eps)
    if not table.fitted:
        raise RenewalError("Renewal table has no fitted tail; evaluate it with table.at(eps)")
    return table


def dilog(x: float) -> float:
    """Li_2(x) for x in [0, 1]."""
    return float(spence(1.0 - x))


def renewal_series(x: float, table: RenewalTable, tail_shift: float = 0.0) -> float:
    """sum_n a_n(x) including the modelled tail.

    Args:
        x: Generating-function argument in [0, 1]
        table: Table evaluated at eps (table.at(eps))
        tail_shift: Tail constant offset in units of its standard error

    Returns:
        The series value

    Raises:
        RenewalError: If the table has no fitted tail
    """
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"Series argument must lie in [0, 1], got {x}", "x")
    table = _fitted(table, None)
    eps = table.eps
    zcheck = table.zcheck()
    n = np.arange(1, table.n_max + 1)
    powers = x ** n
    head = eps * zcheck[0] * x + eps ** 2 * float(np.dot(zcheck[2:], powers[2:]))
    constant = max(table.tail_constant + tail_shift * table.tail_stderr, 0.0)
    if x == 0.0 or constant == 0.0:
        return head
    partial = float(np.sum(powers / n.astype(float) ** 2))
    return head + constant * max(dilog(x) - partial, 0.0)


def generating_root(table: RenewalTable, tolerance: float = 1e-14) -> float:
    """Root x in (0, 1] of sum_n a_n(x) = 1, or 1 when the series at 1 is below one."""
    if renewal_series(1.0, table) <= 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if renewal_series(mid, table) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_free_energy(eps: float, table: RenewalTable,
                      config: Optional[RenewalConfig] = None) -> float:
    """Free energy f(eps) = -log x^eps of the homogeneous model.

    Args:
        eps: Pinning reward (> 0)
        table: Renewal table; re-evaluated at eps if needed
        config: Renewal configuration (root tolerance)

    Returns:
        f >= 0
    """
    config = config or get_default_renewal_config()
    validate_positive(eps, "eps")
    table = _fitted(table, eps)
    x = generating_root(table, config.root_tolerance)
    return 0.0 if x >= 1.0 else -math.log(x)


def free_energy_curve(table: RenewalTable, eps_values: Iterable[float],
                      config: Optional[RenewalConfig] = None) -> List[FreeEnergyEstimate]:
    """f on a grid of rewards."""
    return [
        FreeEnergyEstimate(value=solve_free_energy(eps, table, config), method=METHOD_RENEWAL,
                           params={"eps": eps, "n_max": table.n_max, "source": table.source})
        for eps in eps_values
    ]


def _criticality(table: RenewalTable, eps: float, shift: float) -> float:
    return renewal_series(1.0, table.at(eps), shift)


def _critical_for_shift(table: RenewalTable, shift: float, rtol: float) -> float:
    hi = 1.0
    steps = 0
    while _criticality(table, hi, shift) <= 1.0:
        hi *= 2.0
        steps += 1
        if steps > MAX_BRACKET_STEPS:
            raise BracketingError(f"Criticality series stays below one up to eps={hi:.3e}")
    lo = hi / 2.0
    steps = 0
    while _criticality(table, lo, shift) > 1.0:
        lo /= 2.0
        steps += 1
        if steps > MAX_BRACKET_STEPS:
            raise BracketingError(f"Criticality series stays above one down to eps={lo:.3e}")
    while (hi - lo) > rtol * hi:
        mid = math.sqrt(lo * hi)
        if _criticality(table, mid, shift) > 1.0:
            hi = mid
        else:
            lo = mid
        logger.debug(f"Critical bracket [{lo:.15f}, {hi:.15f}]")
    return math.sqrt(lo * hi)


def critical_point(table: RenewalTable, rtol: float = CRITICAL_RTOL) -> CriticalPointEstimate:
    """eps_c solving eps Ž_{0,1} + eps^2 sum_{n>=3} Ž_{0,n}(eps) = 1.

    The bracket comes from repeating the solve with the tail constant moved
    by one standard error in each direction.

    Args:
        table: Renewal table (coefficients only are used)
        rtol: Relative bisection tolerance

    Returns:
        CriticalPointEstimate

    Raises:
        BracketingError: If no sign change is found
    """
    value = _critical_for_shift(table, 0.0, rtol)
    lower = _critical_for_shift(table, 1.0, rtol)
    upper = _critical_for_shift(table, -1.0, rtol)
    logger.info(f"Critical reward {value:.12f} in [{lower:.12f}, {upper:.12f}] "
                f"from {table.source} table n_max={table.n_max}")
    return CriticalPointEstimate(value=value, lower=min(lower, value), upper=max(upper, value),
                                 method=METHOD_RENEWAL)


def _short_range_sum(table: RenewalTable, eps: float) -> float:
    """sum_{n>=3} eps Ž_{0,n}(eps) with the modelled tail."""
    fitted = table.at(eps)
    zcheck = fitted.zcheck()
    n = np.arange(1, table.n_max + 1, dtype=float)
    remainder = ZETA_2 - float(np.sum(1.0 / n ** 2))
    return eps * float(np.sum(zcheck[2:])) + fitted.tail_constant / eps * remainder


@dataclass
class AsymptoteReport:
    """Ratios f(eps_c e^delta) (-log delta) / delta near the critical point."""
    eps_c: float
    delta: List[float] = field(default_factory=list)
    free_energy: List[float] = field(default_factory=list)
    ratio: List[float] = field(default_factory=list)
    slope: List[float] = field(default_factory=list)
    relative_variation: List[float] = field(default_factory=list)
    limit: float = math.nan
    limit_stderr: float = math.nan
    c0: float = math.nan
    tail_constant: float = math.nan
    c1_predicted: float = math.nan
    caveat: str = ("ratios converge logarithmically in delta; "
                   "the extrapolated limit is indicative only")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def asymptote_constant(table: RenewalTable, delta_grid: Optional[Iterable[float]] = None,
                       eps_c: Optional[float] = None,
                       config: Optional[RenewalConfig] = None) -> AsymptoteReport:
    """Ratio sequence of the near-critical free energy and its extrapolation.

    The limit is extrapolated linearly in 1/(-log delta). Alongside it the
    report carries c0 (forward difference of sum_{n>=3} eps Ž_{0,n} at
    eps_c) and the implied c1 = (1 + eps_c^2 c0) / C.

    Args:
        table: Renewal table
        delta_grid: Offsets delta in (0, 0.3]; log grid from the config by default
        eps_c: Critical reward; computed from the table if omitted
        config: Renewal configuration

    Returns:
        AsymptoteReport ordered by increasing delta
    """
    config = config or get_default_renewal_config()
    if delta_grid is None:
        delta_grid = np.geomspace(config.delta_min, config.delta_max, config.delta_points)
    deltas = np.sort(np.asarray(list(delta_grid), dtype=float))
    if deltas.size == 0 or deltas[0] <= 0 or deltas[-1] > 0.3:
        raise ValidationError("Offsets must lie in (0, 0.3]", "delta_grid")
    if eps_c is None:
        eps_c = critical_point(table).value

    report = AsymptoteReport(eps_c=eps_c)
    for delta in deltas:
        f = solve_free_energy(eps_c * math.exp(delta), table, config)
        report.delta.append(float(delta))
        report.free_energy.append(f)
        report.ratio.append(f * (-math.log(delta)) / delta)
        report.slope.append(f / delta)
    ratios = np.asarray(report.ratio)
    if ratios.size > 1:
        report.relative_variation = (np.abs(np.diff(ratios)) / ratios[:-1]).tolist()
    if ratios.size >= 4:
        coeffs, cov = np.polyfit(1.0 / (-np.log(deltas)), ratios, 1, cov=True)
        report.limit = float(coeffs[1])
        report.limit_stderr = float(math.sqrt(max(cov[1, 1], 0.0)))

    base = _short_range_sum(table, eps_c)
    bumped = _short_range_sum(table, eps_c * (1.0 + DERIVATIVE_STEP))
    report.c0 = (bumped - base) / (eps_c * DERIVATIVE_STEP)
    report.tail_constant = float(table.at(eps_c).tail_constant)
    report.c1_predicted = (1.0 + eps_c ** 2 * report.c0) / report.tail_constant
    logger.info(f"Asymptote ratios from {report.ratio[0]:.4f} to {report.ratio[-1]:.4f}, "
                f"extrapolated {report.limit:.4f}")
    return report


@dataclass
class RenewalTheoremReport:
    """Iterated u_n = b_n + sum a_i u_{n-i} against sum b / sum n a."""
    eps: float
    x: float
    n_iter: int
    u_final: float
    predicted: float
    relative_error: float
    u_tail: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def renewal_theorem_check(table: RenewalTable, eps: float, n_iter: int = 2000,
                          config: Optional[RenewalConfig] = None) -> RenewalTheoremReport:
    """Iterate the renewal equation of u_n = x^n Z_{0,n} at the root x = x^eps.

    The first term of the decomposition carries a single eps, so the
    inhomogeneous part is b_n = x^n Ž_{0,n} + (1/eps - 1) a_{n-1} u_1 for n >= 3.

    Args:
        table: Renewal table
        eps: Reward above the critical point
        n_iter: Number of iterations
        config: Renewal configuration

    Returns:
        RenewalTheoremReport

    Raises:
        RenewalError: If eps is not in the localized phase
    """
    config = config or get_default_renewal_config()
    fitted = _fitted(table, eps)
    x = generating_root(fitted, config.root_tolerance)
    if x >= 1.0:
        raise RenewalError(f"eps={eps} is not above the critical point; the renewal is defective")

    n = np.arange(1, n_iter + 1, dtype=float)
    zhat = np.empty(n_iter)
    known = min(n_iter, fitted.n_max)
    zhat[:known] = fitted.zcheck()[:known]
    zhat[known:] = fitted.tail_constant / (eps ** 2 * n[known:] ** 2)
    powers = x ** n
    a = eps ** 2 * zhat * powers
    a[0] = eps * zhat[0] * x
    a[1] = 0.0

    u = np.zeros(n_iter)
    u1 = x * zhat[0]
    b = zhat * powers
    b[1] = x ** 2 / (2.0 * math.pi) - a[0] * u1
    b[2:] += (1.0 / eps - 1.0) * a[1:-1] * u1
    u[0] = b[0]
    for i in range(1, n_iter):
        u[i] = b[i] + float(np.dot(a[:i], u[i - 1::-1]))

    total = renewal_series(x, fitted)
    head = np.arange(1, fitted.n_max + 1, dtype=float)
    mean = (a[0] + float(np.sum(head[2:] * eps ** 2 * fitted.zcheck()[2:] * x ** head[2:]))
            + fitted.tail_constant * (-math.log1p(-x) - float(np.sum(x ** head / head))))
    sum_b = (b[0] + b[1] + (total - a[0]) / eps ** 2
             + (1.0 / eps - 1.0) * u1 * (total - a[0]))
    predicted = sum_b / mean
    error = abs(u[-1] - predicted) / abs(predicted)
    logger.info(f"Renewal theorem at eps={eps}: u_N={u[-1]:.10e}, predicted {predicted:.10e}")
    return RenewalTheoremReport(eps=eps, x=x, n_iter=n_iter, u_final=float(u[-1]),
                                predicted=float(predicted), relative_error=float(error),
                                u_tail=u[-5:].tolist())
