"""Quenched and annealed free energies and their critical points.

Quenched values average (1/n) log(Z^{beta,eps}/Z^{beta,0}) over disorder
realizations drawn from per-index streams of one master seed. Numerators come
from the transfer operator on the adequate grid of each realization, audited
at the configured tolerance, and denominators from the closed-form determinant.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Optional, Tuple, Union

import numpy as np

from src.config import (
    DEFAULT_FREE_ENERGY_FLOOR,
    DEFAULT_SIGMA_LEVEL,
    EnumerationConfig,
    MonteCarloConfig,
    RenewalConfig,
    TransferConfig,
    get_default_enumeration_config,
    get_default_monte_carlo_config,
    get_default_transfer_config,
)
from src.core.disorder import sample_disorder
from src.core.potential import AnnealedBondPotential, GaussianBondPotential
from src.models.params import ModelParams
from src.models.results import (
    METHOD_MONTE_CARLO,
    METHOD_RENEWAL,
    METHOD_TRANSFER,
    CriticalPointEstimate,
    FreeEnergyEstimate,
)
from src.models.validation import ValidationError, validate_nonnegative, validate_seed, validate_size
from src.partition.enumeration import adjusted_partition
from src.partition.statistics import log_partition_delocalized
from src.quenched.base import BisectionError
from src.quenched.grid import TransferGrid
from src.quenched.transfer import TransferOperator, TransferZCheck, adequate_grid
from src.renewal.solver import solve_free_energy
from src.renewal.table import EnumerationZCheck, RenewalTable, build_table


logger = logging.getLogger(__name__)

DENOMINATORS = ("closed_form", "grid")
ANNEALED_METHODS = ("renewal", "transfer")
QUENCHED_ESTIMATORS = ("ratio", "slope")
MIN_SLOPE_SIZE = 8


def _mean_and_stderr(values: np.ndarray):
    if values.size < 2:
        return float(values.mean()), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def quenched_free_energy(params: ModelParams, n_samples: Optional[int] = None,
                         seed: Optional[int] = None, grid: Optional[TransferGrid] = None,
                         denominator: str = "closed_form",
                         transfer_config: Optional[TransferConfig] = None,
                         config: Optional[MonteCarloConfig] = None,
                         audit: bool = True, estimator: str = "ratio") -> FreeEnergyEstimate:
    """Mean and standard error of F_n over disorder realizations.

    Args:
        params: beta, eps and the size n (>= 2)
        n_samples: Number of realizations (defaults to the configuration)
        seed: Master seed; realization i uses stream i
        grid: Fixed transfer grid; by default each realization gets the
            adequate grid of its own weights
        denominator: "closed_form" (exact) or "grid" (same grid at eps = 0)
        transfer_config: Transfer configuration
        config: Monte Carlo configuration (sample count, threads)
        audit: Check the outer band of the grid at size n
        estimator: "ratio" for (1/n) log(Z^{beta,eps}_n / Z^{beta,0}_n), or
            "slope" for the slope of that log ratio over sizes n/2..n from
            one sweep, which drops the boundary transient

    Returns:
        FreeEnergyEstimate tagged monte_carlo (transfer_grid at beta = 0)

    Raises:
        GridInadequacyError: If a realization needs more points than allowed
            or the audit fails
    """
    config = config or get_default_monte_carlo_config()
    transfer_config = transfer_config or get_default_transfer_config()
    n_samples = n_samples or config.n_samples
    validate_size(params.n, MIN_SLOPE_SIZE if estimator == "slope" else 2)
    validate_size(n_samples, 1, "n_samples")
    if denominator not in DENOMINATORS:
        raise ValidationError(f"Unknown denominator '{denominator}', expected one of {DENOMINATORS}",
                              "denominator")
    if estimator not in QUENCHED_ESTIMATORS:
        raise ValidationError(f"Unknown estimator '{estimator}', expected one of {QUENCHED_ESTIMATORS}",
                              "estimator")
    if params.beta > 0 and seed is None:
        raise ValidationError("A master seed is required for disorder averages", "seed")
    if seed is not None:
        validate_seed(seed)
    n = params.n
    sizes = np.arange(n // 2, n + 1) if estimator == "slope" else np.array([n])

    def realization(stream: int) -> Tuple[float, TransferGrid]:
        disorder = None
        weights = None
        if params.beta > 0:
            disorder = sample_disorder(n, seed, stream=stream)
            weights = disorder.weights(params.beta)
        operator = TransferOperator(GaussianBondPotential(weights), transfer_config)
        used = grid or adequate_grid(operator.potential.effective_weights(n), transfer_config)

        def lattice_logs(eps: float) -> np.ndarray:
            sweep = operator.sweep(eps, n, grid=used)
            if audit:
                operator.require_adequate(eps, n, used, reference=float(sweep.segment_log()[0, -1]))
            return sweep.lattice_log()[0, sizes - 1]

        log_num = lattice_logs(params.eps)
        if denominator == "grid":
            log_den = lattice_logs(0.0)
        else:
            log_den = np.array([log_partition_delocalized(disorder, params.beta, int(m)).log_value
                                for m in sizes])
        if estimator == "slope":
            return float(np.polyfit(sizes.astype(float), log_num - log_den, 1)[0]), used
        return float(log_num[-1] - log_den[-1]) / n, used

    streams = range(1 if params.beta == 0 else n_samples)
    logger.info(f"Starting quenched estimate beta={params.beta} eps={params.eps} n={n} "
                f"over {len(streams)} realization(s)")
    if config.threads > 1 and len(streams) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as executor:
            results = list(executor.map(realization, streams))
    else:
        results = [realization(stream) for stream in streams]
    values = np.array([value for value, _ in results])
    grids = [used for _, used in results]
    mean, stderr = _mean_and_stderr(values)
    logger.info(f"Completed quenched estimate: F_n={mean:.6e} +- {stderr:.1e}")
    return FreeEnergyEstimate(
        value=mean,
        stderr=stderr,
        method=METHOD_TRANSFER if params.beta == 0 else METHOD_MONTE_CARLO,
        params={"beta": params.beta, "eps": params.eps, "n": n, "n_samples": len(streams),
                "seed": seed, "grid_size": max(g.size for g in grids),
                "radius": max(g.radius for g in grids), "denominator": denominator,
                "estimator": estimator},
    )


def annealed_table(beta: float, n_max: Optional[int] = None, grid_size: Optional[int] = None,
                   radius: Optional[float] = None,
                   transfer_config: Optional[TransferConfig] = None,
                   renewal_config: Optional[RenewalConfig] = None) -> RenewalTable:
    """Ž table of the homogeneous model with the annealed potential V_beta.

    At beta = 0 the exact enumeration coefficients are used.
    """
    validate_nonnegative(beta, "beta")
    if beta == 0:
        provider = EnumerationZCheck()
    else:
        provider = TransferZCheck(AnnealedBondPotential(beta), grid_size=grid_size, radius=radius,
                                  config=transfer_config, renewal_config=renewal_config)
    return build_table(provider, n_max, config=renewal_config)


def annealed_free_energy(beta: float, eps: float, method: str = "renewal",
                         table: Optional[RenewalTable] = None, n: int = 32,
                         grid: Optional[TransferGrid] = None,
                         transfer_config: Optional[TransferConfig] = None,
                         renewal_config: Optional[RenewalConfig] = None,
                         audit: bool = True) -> FreeEnergyEstimate:
    """F^a(beta, eps), the free energy of the homogeneous model with potential V_beta.

    Args:
        beta: Disorder strength
        eps: Pinning reward
        method: "renewal" (generating-function root on a Ž table) or
            "transfer" (slope of log Z over sizes n/2..n)
        table: Prebuilt annealed table for the renewal method
        n: Largest size for the transfer method
        grid: Grid for the transfer method (adequate grid for size n by default)
        transfer_config: Transfer configuration
        renewal_config: Renewal configuration
        audit: Check the outer band of the grid at size n

    Returns:
        FreeEnergyEstimate; stderr is the slope standard error for "transfer"
    """
    validate_nonnegative(beta, "beta")
    validate_nonnegative(eps, "eps")
    if method not in ANNEALED_METHODS:
        raise ValidationError(f"Unknown method '{method}', expected one of {ANNEALED_METHODS}", "method")

    if method == "renewal":
        if eps == 0:
            return FreeEnergyEstimate(value=0.0, method=METHOD_RENEWAL, params={"beta": beta, "eps": eps})
        table = table or annealed_table(beta, transfer_config=transfer_config,
                                        renewal_config=renewal_config)
        value = solve_free_energy(eps, table, renewal_config)
        return FreeEnergyEstimate(value=value, method=METHOD_RENEWAL,
                                  params={"beta": beta, "eps": eps, "n_max": table.n_max,
                                          "source": table.source})

    validate_size(n, MIN_SLOPE_SIZE)
    potential = AnnealedBondPotential(beta) if beta > 0 else GaussianBondPotential()
    operator = TransferOperator(potential, transfer_config)
    grid = grid or adequate_grid(potential.effective_weights(n), transfer_config)
    sweep = operator.sweep(eps, n, grid=grid)
    if audit:
        operator.require_adequate(eps, n, grid, reference=float(sweep.segment_log()[0, -1]))
    sizes = np.arange(n // 2, n + 1)
    logs = sweep.lattice_log()[0, sizes - 1]
    coeffs, cov = np.polyfit(sizes.astype(float), logs, 1, cov=True)
    return FreeEnergyEstimate(value=float(coeffs[0]), stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
                              method=METHOD_TRANSFER,
                              params={"beta": beta, "eps": eps, "n": n, "grid_size": grid.size,
                                      "radius": grid.radius})


FreeEnergyFn = Callable[[float], Union[FreeEnergyEstimate, float]]


def critical_point_bisect(free_energy_fn: FreeEnergyFn, lo: float, hi: float,
                          tol: float = 1e-3, floor: float = DEFAULT_FREE_ENERGY_FLOOR,
                          sigma: float = DEFAULT_SIGMA_LEVEL) -> CriticalPointEstimate:
    """Bisect on the predicate F(eps) > max(sigma * stderr, floor).

    The floor makes the estimate err upwards; raising it moves the estimate up.

    Args:
        free_energy_fn: eps -> FreeEnergyEstimate (or a plain float)
        lo: Reward where the predicate fails
        hi: Reward where the predicate holds
        tol: Bracket width on exit
        floor: Smallest free energy counted as positive
        sigma: Standard errors required

    Returns:
        CriticalPointEstimate with the final bracket

    Raises:
        BisectionError: If the predicate does not change sign on [lo, hi]
    """
    if not 0 <= lo < hi:
        raise ValidationError(f"Need 0 <= lo < hi, got [{lo}, {hi}]", "bracket")
    method = METHOD_MONTE_CARLO

    def positive(eps: float) -> bool:
        nonlocal method
        estimate = free_energy_fn(eps)
        if not isinstance(estimate, FreeEnergyEstimate):
            estimate = FreeEnergyEstimate(value=float(estimate), method=METHOD_RENEWAL)
        method = estimate.method
        return estimate.exceeds(floor, sigma)

    if positive(lo):
        raise BisectionError(f"Free energy already positive at the lower end eps={lo}")
    if not positive(hi):
        raise BisectionError(f"Free energy not positive at the upper end eps={hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            hi = mid
        else:
            lo = mid
        logger.debug(f"Critical bracket [{lo:.6f}, {hi:.6f}]")
    return CriticalPointEstimate(value=0.5 * (lo + hi), lower=lo, upper=hi, method=method)


@dataclass
class JensenReport:
    """(1/n) E log of the adjusted partition against (1/n) log of its mean."""
    beta: float
    eps: float
    n: int
    n_samples: int
    quenched: float
    quenched_stderr: float
    annealed: float

    @property
    def holds(self) -> bool:
        return self.quenched <= self.annealed + DEFAULT_SIGMA_LEVEL * self.quenched_stderr

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["holds"] = self.holds
        return data


def annealed_log_partition(beta: float, eps: float, n: int,
                           grid: Optional[TransferGrid] = None,
                           config: Optional[TransferConfig] = None, audit: bool = True) -> float:
    """log of the disorder mean of the adjusted partition, bond by bond through V_beta."""
    potential = AnnealedBondPotential(beta) if beta > 0 else GaussianBondPotential()
    return TransferOperator(potential, config).log_partition(eps, n, grid, audit)


def jensen_check(params: ModelParams, n_samples: int, seed: int,
                 enumeration_config: Optional[EnumerationConfig] = None,
                 transfer_config: Optional[TransferConfig] = None) -> JensenReport:
    """Compare the quenched and annealed growth of the adjusted partition at small n.

    Args:
        params: beta, eps and the size n (within the enumeration cap)
        n_samples: Number of realizations
        seed: Master seed
        enumeration_config: Enumeration configuration
        transfer_config: Transfer configuration for the annealed mean

    Returns:
        JensenReport
    """
    validate_size(n_samples, 1, "n_samples")
    validate_seed(seed)
    enumeration_config = enumeration_config or get_default_enumeration_config()
    values = np.array([
        adjusted_partition(params, sample_disorder(params.n, seed, stream=stream),
                           enumeration_config).log_value
        for stream in range(n_samples)
    ]) / params.n
    mean, stderr = _mean_and_stderr(values)
    annealed = annealed_log_partition(params.beta, params.eps, params.n,
                                      config=transfer_config) / params.n
    report = JensenReport(beta=params.beta, eps=params.eps, n=params.n, n_samples=n_samples,
                          quenched=mean, quenched_stderr=stderr, annealed=annealed)
    if not report.holds:
        logger.warning(f"Jensen ordering violated: quenched {mean:.6e} > annealed {annealed:.6e}")
    return report
