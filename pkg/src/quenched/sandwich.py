"""Bounds relating the annealed model to the non-random one.

Averaging each bond weight separately gives, for every size,

    M(-beta)^{-1} Z^{0, eps M(-beta)^{-1/2}} <= E Z_adj <= M(beta/2)^2 Z^{0, eps M(beta/2)}

and therefore 1/M(beta/2) <= eps_c^a(beta) / eps_c(0) <= sqrt(M(-beta)).
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from src.config import (
    EnumerationConfig,
    RenewalConfig,
    TransferConfig,
    get_default_enumeration_config,
)
from src.core.gaussian import log_mgf, mgf
from src.models.params import ModelParams
from src.models.results import CriticalPointEstimate
from src.models.validation import validate_nonnegative, validate_positive, validate_size
from src.partition.enumeration import partition_enumerate
from src.quenched.estimators import annealed_log_partition, annealed_table
from src.quenched.grid import TransferGrid
from src.quenched.transfer import TransferOperator
from src.renewal.solver import critical_point
from src.renewal.table import EnumerationZCheck, build_table


logger = logging.getLogger(__name__)

DEFAULT_BOUND_SIZE = 6
DEFAULT_BOUND_EPS = 0.5


def _log_delocalized_model(eps: float, n: int,
                           enumeration_config: Optional[EnumerationConfig],
                           transfer_config: Optional[TransferConfig]) -> float:
    """log Z_n of the non-random model by enumeration, or by transfer beyond the cap."""
    enumeration_config = enumeration_config or get_default_enumeration_config()
    if n <= enumeration_config.max_size:
        return partition_enumerate(ModelParams(beta=0.0, eps=eps, n=n),
                                   config=enumeration_config).log_value
    return TransferOperator(config=transfer_config).log_partition(eps, n)


@dataclass
class AnnealedBounds:
    """log E Z_adj next to its two comparison values at one size."""
    beta: float
    eps: float
    n: int
    log_mean: float
    log_upper: float
    log_lower: float
    tolerance: float = 1e-8

    @property
    def holds(self) -> bool:
        return (self.log_lower <= self.log_mean + self.tolerance
                and self.log_mean <= self.log_upper + self.tolerance)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["holds"] = self.holds
        return data


def annealed_partition_bounds(beta: float, eps: float, n: int,
                              grid: Optional[TransferGrid] = None,
                              enumeration_config: Optional[EnumerationConfig] = None,
                              transfer_config: Optional[TransferConfig] = None) -> AnnealedBounds:
    """E Z_adj by bond-wise quadrature with its upper and lower comparison values.

    Args:
        beta: Disorder strength
        eps: Pinning reward
        n: Lattice size (>= 2)
        grid: Grid for the annealed transfer run (auto radius when omitted)
        enumeration_config: Enumeration configuration for the non-random values
        transfer_config: Transfer configuration

    Returns:
        AnnealedBounds in the log domain
    """
    validate_nonnegative(beta, "beta")
    validate_nonnegative(eps, "eps")
    validate_size(n, 2)
    log_mean = annealed_log_partition(beta, eps, n, grid, transfer_config)
    upper_eps = eps * mgf(0.5 * beta)
    lower_eps = eps * math.exp(-0.5 * log_mgf(-beta))
    log_upper = 2.0 * log_mgf(0.5 * beta) + _log_delocalized_model(
        upper_eps, n, enumeration_config, transfer_config)
    log_lower = -log_mgf(-beta) + _log_delocalized_model(
        lower_eps, n, enumeration_config, transfer_config)
    bounds = AnnealedBounds(beta=beta, eps=eps, n=n, log_mean=log_mean,
                            log_upper=log_upper, log_lower=log_lower)
    if not bounds.holds:
        logger.warning(f"Annealed bounds violated at beta={beta} eps={eps} n={n}: {bounds.to_dict()}")
    return bounds


@dataclass
class SandwichReport:
    """eps_c^a(beta) / eps_c(0) against [1/M(beta/2), sqrt(M(-beta))]."""
    beta: float
    eps_c_annealed: CriticalPointEstimate
    eps_c_pure: CriticalPointEstimate
    lower_bound: float
    upper_bound: float
    partition_bounds: Optional[AnnealedBounds] = None
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.eps_c_annealed.value / self.eps_c_pure.value

    @property
    def ratio_interval(self):
        """Ratio range allowed by the two error bars."""
        return (self.eps_c_annealed.lower / self.eps_c_pure.upper,
                self.eps_c_annealed.upper / self.eps_c_pure.lower)

    @property
    def lower_holds(self) -> bool:
        return self.ratio_interval[1] >= self.lower_bound * (1.0 - 1e-12)

    @property
    def upper_holds(self) -> bool:
        return self.ratio_interval[0] <= self.upper_bound * (1.0 + 1e-12)

    @property
    def passed(self) -> bool:
        partition_ok = self.partition_bounds is None or self.partition_bounds.holds
        return self.lower_holds and self.upper_holds and partition_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "beta": self.beta,
            "eps_c_annealed": self.eps_c_annealed.to_dict(),
            "eps_c_pure": self.eps_c_pure.to_dict(),
            "ratio": self.ratio,
            "ratio_interval": list(self.ratio_interval),
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "lower_holds": self.lower_holds,
            "upper_holds": self.upper_holds,
            "partition_bounds": None if self.partition_bounds is None else self.partition_bounds.to_dict(),
            "passed": self.passed,
            "notes": self.notes,
        }


def sandwich_check(beta: float, n_max: Optional[int] = None, grid_size: Optional[int] = None,
                   bound_size: int = DEFAULT_BOUND_SIZE, bound_eps: float = DEFAULT_BOUND_EPS,
                   transfer_config: Optional[TransferConfig] = None,
                   renewal_config: Optional[RenewalConfig] = None) -> SandwichReport:
    """Compare the annealed and non-random critical points and the partition-level bounds.

    Args:
        beta: Disorder strength (>= 0)
        n_max: Ž table truncation
        grid_size: Grid size for the annealed table
        bound_size: Size of the partition-level check (0 skips it)
        bound_eps: Reward of the partition-level check
        transfer_config: Transfer configuration
        renewal_config: Renewal configuration

    Returns:
        SandwichReport; violations are reported, not raised
    """
    validate_nonnegative(beta, "beta")
    validate_positive(bound_eps, "bound_eps")
    pure_table = build_table(EnumerationZCheck(), n_max, config=renewal_config)
    eps_c_pure = critical_point(pure_table)
    if beta == 0:
        eps_c_annealed = eps_c_pure
    else:
        eps_c_annealed = critical_point(annealed_table(beta, n_max, grid_size,
                                                       transfer_config=transfer_config,
                                                       renewal_config=renewal_config))
    partition_bounds = None
    if bound_size:
        partition_bounds = annealed_partition_bounds(beta, bound_eps, bound_size,
                                                     transfer_config=transfer_config)
    report = SandwichReport(
        beta=beta,
        eps_c_annealed=eps_c_annealed,
        eps_c_pure=eps_c_pure,
        lower_bound=1.0 / mgf(0.5 * beta),
        upper_bound=math.sqrt(mgf(-beta)),
        partition_bounds=partition_bounds,
        notes={"n_max": pure_table.n_max},
    )
    logger.info(f"Sandwich at beta={beta}: ratio {report.ratio:.6f} in "
                f"[{report.lower_bound:.6f}, {report.upper_bound:.6f}] -> {report.passed}")
    return report
