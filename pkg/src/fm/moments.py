"""Fractional moments of the adjusted partition and their deterministic bounds.

A_s = E Z_adj(s)^gamma is estimated by Monte Carlo over disorder with exact
enumeration per realization. Beyond the enumeration cap A_s is replaced by
the smaller of two bounds built from exact annealed values:

  Jensen:  A_s <= (E Z_adj(s))^gamma
  Hölder:  A_s <= exp(n lam^2 gamma / (2 (1 - gamma))) (E~ Z_adj(s))^gamma, n = s + 1

where E~ is the expectation under the charges tilted to mean -lam.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.config import (
    CertifierConfig,
    DEFAULT_SIGMA_LEVEL,
    EnumerationConfig,
    get_default_certifier_config,
)
from src.core.disorder import realization_generator, sample_disorder
from src.core.gaussian import log_mgf, log_mgf_second_derivative
from src.core.potential import AnnealedBondPotential, GaussianBondPotential
from src.fm.base import ParameterError
from src.fm.params import FMParams
from src.models.params import ModelParams
from src.models.results import METHOD_ENUMERATION, METHOD_MONTE_CARLO, METHOD_TRANSFER
from src.models.validation import validate_nonnegative, validate_seed, validate_size
from src.partition.base import EnumerationLimitError
from src.partition.enumeration import adjusted_partition, lattice_log_coefficients, log_polynomial
from src.quenched.transfer import TransferOperator


logger = logging.getLogger(__name__)

TILT_METHODS = ("weight", "shifted", "exact")
C_M_GRID = 201


@dataclass
class MomentEstimate:
    """A moment of the adjusted partition with its standard error."""
    s: int
    value: float
    stderr: float = 0.0
    method: str = METHOD_MONTE_CARLO

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _enumeration_config(config: CertifierConfig) -> EnumerationConfig:
    return EnumerationConfig(max_size=config.enumeration_cap, threads=config.threads)


def _check_cap(s: int, config: CertifierConfig) -> None:
    if s > config.enumeration_cap:
        raise EnumerationLimitError(
            f"Size {s} exceeds the certifier enumeration cap {config.enumeration_cap}", "s"
        )


def _summary(s: int, values: np.ndarray, method: str) -> MomentEstimate:
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return MomentEstimate(s=s, value=float(values.mean()), stderr=stderr, method=method)


def _log_adjusted(s: int, beta: float, eps: float, seed: int, stream: int,
                  config: CertifierConfig, mean_shift: float = 0.0) -> Tuple[float, np.ndarray]:
    """log Z_adj(s) of one realization and its charges."""
    disorder = sample_disorder(s, seed, mean_shift=mean_shift, stream=stream)
    value = adjusted_partition(ModelParams(beta=beta, eps=eps, n=s), disorder,
                               _enumeration_config(config))
    return value.log_value, disorder.omega


def fractional_moment(s: int, gamma: float, beta: float, eps: float, n_samples: int,
                      seed: int, config: Optional[CertifierConfig] = None) -> MomentEstimate:
    """Monte Carlo estimate of A_s = E Z_adj(s)^gamma.

    Args:
        s: Lattice size (0 gives the exact M(gamma beta / 2))
        gamma: Exponent in (0, 1]
        beta: Disorder strength
        eps: Pinning reward
        n_samples: Number of realizations
        seed: Master seed
        config: Certifier configuration (enumeration cap)

    Returns:
        MomentEstimate

    Raises:
        EnumerationLimitError: If s exceeds the cap
    """
    config = config or get_default_certifier_config()
    if not 0.0 < gamma <= 1.0:
        raise ParameterError(f"gamma must lie in (0, 1], got {gamma}", "gamma")
    validate_nonnegative(beta, "beta")
    if s == 0:
        return MomentEstimate(s=0, value=math.exp(log_mgf(0.5 * gamma * beta)), method=METHOD_ENUMERATION)
    validate_size(s, 1, "s")
    _check_cap(s, config)
    validate_size(n_samples, 1, "n_samples")
    validate_seed(seed)
    values = np.array([
        math.exp(gamma * _log_adjusted(s, beta, eps, seed, stream, config)[0])
        for stream in range(n_samples)
    ])
    return _summary(s, values, METHOD_MONTE_CARLO)


def subadditive_bound(s: int, gamma: float, beta: float, eps: float, n_samples: int,
                      seed: int, config: Optional[CertifierConfig] = None) -> MomentEstimate:
    """Monte Carlo estimate of E sum_S term_S^gamma over the contact-set expansion.

    Since (a_1 + ... + a_m)^gamma <= a_1^gamma + ... + a_m^gamma this dominates A_s
    realization by realization; the same streams as fractional_moment are used.
    """
    config = config or get_default_certifier_config()
    validate_size(s, 1, "s")
    _check_cap(s, config)
    validate_seed(seed)
    values = []
    for stream in range(n_samples):
        disorder = sample_disorder(s, seed, stream=stream)
        coefficients = lattice_log_coefficients(disorder.weights(beta), power=gamma,
                                                config=_enumeration_config(config))
        shift = 0.5 * gamma * beta * float(np.sum(disorder.omega))
        values.append(math.exp(shift + log_polynomial(coefficients, eps, power=gamma)))
    return _summary(s, np.asarray(values), METHOD_MONTE_CARLO)


def _annealed_lattice_logs(beta: float, eps: float, s_max: int,
                           config: CertifierConfig, no_double_return: bool = False) -> np.ndarray:
    """log E Z_adj(s) for s = 1..s_max (index s - 1) from one annealed sweep."""
    potential = AnnealedBondPotential(beta) if beta > 0 else GaussianBondPotential()
    operator = TransferOperator(potential, config.transfer)
    return operator.sweep(eps, s_max, no_double_return=no_double_return).lattice_log()[0]


def annealed_moment(s: int, beta: float, eps: float,
                    config: Optional[CertifierConfig] = None) -> float:
    """E Z_adj(s), exact up to grid error."""
    config = config or get_default_certifier_config()
    if s == 0:
        return math.exp(log_mgf(0.5 * beta))
    return math.exp(_annealed_lattice_logs(beta, eps, s, config)[-1])


def tilted_expectation(s: int, params: FMParams, eps: float, n_samples: int = 0,
                       seed: Optional[int] = None, method: str = "weight",
                       config: Optional[CertifierConfig] = None) -> MomentEstimate:
    """E~ Z_adj(s) under charges tilted by exp(-lam omega) / M(-lam).

    Args:
        s: Lattice size
        params: Certifier parameters (beta and lam are used)
        eps: Pinning reward
        n_samples: Realizations for the Monte Carlo methods
        seed: Master seed for the Monte Carlo methods
        method: "weight" (base law with the explicit density),
            "shifted" (charges drawn with mean -lam) or
            "exact" (e^{-beta lam} E Z_adj(s) at eps e^{-beta lam / 2})
        config: Certifier configuration

    Returns:
        MomentEstimate
    """
    config = config or get_default_certifier_config()
    if method not in TILT_METHODS:
        raise ParameterError(f"Unknown tilt method '{method}', expected one of {TILT_METHODS}", "method")
    beta, lam = params.beta, params.lam
    if method == "exact":
        if s == 0:
            value = math.exp(log_mgf(0.5 * beta) - 0.5 * beta * lam)
        else:
            value = math.exp(-beta * lam) * annealed_moment(s, beta, eps * math.exp(-0.5 * beta * lam), config)
        return MomentEstimate(s=s, value=value, method=METHOD_TRANSFER)

    validate_size(s, 1, "s")
    _check_cap(s, config)
    validate_size(n_samples, 1, "n_samples")
    validate_seed(seed)
    log_norm = (s + 1) * log_mgf(-lam)
    values = []
    for stream in range(n_samples):
        if method == "weight":
            log_z, omega = _log_adjusted(s, beta, eps, seed, stream, config)
            values.append(math.exp(log_z - lam * float(np.sum(omega)) - log_norm))
        else:
            log_z, _ = _log_adjusted(s, beta, eps, seed, stream, config, mean_shift=-lam)
            values.append(math.exp(log_z))
    return _summary(s, np.asarray(values), METHOD_MONTE_CARLO)


def tilt_weight_mean(n_charges: int, lam: float, n_samples: int, seed: int) -> MomentEstimate:
    """Monte Carlo mean of the tilt density exp(-lam sum omega) / M(-lam)^n; equals 1."""
    validate_size(n_charges, 1, "n_charges")
    validate_size(n_samples, 1, "n_samples")
    log_norm = n_charges * log_mgf(-lam)
    validate_seed(seed)
    values = np.array([
        math.exp(-lam * float(np.sum(realization_generator(seed, stream).standard_normal(n_charges)))
                 - log_norm)
        for stream in range(n_samples)
    ])
    return _summary(n_charges, values, METHOD_MONTE_CARLO)


def gaussian_c_m(grid_points: int = C_M_GRID) -> float:
    """C_M = max_{|t| <= 1} (log M)''(t) / 2 evaluated on a grid."""
    t = np.linspace(-1.0, 1.0, grid_points)
    return 0.5 * max(log_mgf_second_derivative(float(x)) for x in t)


def holder_prefactor(s: int, params: FMParams) -> float:
    """exp(n lam^2 gamma / (2 (1 - gamma))) for n = s + 1 charges.

    Raises:
        ParameterError: If lam gamma / (1 - gamma) leaves [-1, 1]
    """
    if not params.within_proviso:
        raise ParameterError(
            f"Tilt argument {params.tilt_argument:.4f} outside [-1, 1]; decrease c", "c"
        )
    n = s + 1
    return math.exp(n * params.lam ** 2 * params.gamma / (2.0 * (1.0 - params.gamma)))


def log_moment_bounds(params: FMParams, eps: float, s_max: int,
                      config: Optional[CertifierConfig] = None) -> np.ndarray:
    """log min(Jensen, Hölder) bound on A_s for s = 0..s_max.

    Two annealed sweeps (at eps and at the tilted reward) serve every size.
    """
    config = config or get_default_certifier_config()
    beta, lam, gamma = params.beta, params.lam, params.gamma
    validate_size(s_max, 1, "s_max")
    plain = _annealed_lattice_logs(beta, eps, s_max, config)
    tilted = -beta * lam + _annealed_lattice_logs(beta, eps * math.exp(-0.5 * beta * lam), s_max, config)
    s = np.arange(1, s_max + 1)
    jensen = gamma * plain
    prefactor = s.astype(float) + 1.0
    holder_log = prefactor * lam ** 2 * gamma / (2.0 * (1.0 - gamma)) + gamma * tilted
    if not params.within_proviso:
        holder_log = np.full_like(holder_log, np.inf)
    bounds = np.minimum(jensen, holder_log)
    first = log_mgf(0.5 * gamma * beta)
    return np.concatenate([[first], bounds])


def moment_bound(s: int, params: FMParams, eps: float,
                 config: Optional[CertifierConfig] = None) -> float:
    """Deterministic upper bound on A_s."""
    if s == 0:
        return math.exp(log_mgf(0.5 * params.gamma * params.beta))
    return float(np.exp(log_moment_bounds(params, eps, s, config)[s]))


@dataclass
class HolderReport:
    """Both sides of the Hölder step at one size."""
    s: int
    moment: MomentEstimate
    tilted: MomentEstimate
    prefactor: float
    rhs: float
    rhs_stderr: float
    c_m: float

    @property
    def holds(self) -> bool:
        spread = math.hypot(self.moment.stderr, self.rhs_stderr)
        return self.moment.value <= self.rhs + DEFAULT_SIGMA_LEVEL * spread

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["holds"] = self.holds
        return data


def holder_bound_check(s: int, params: FMParams, eps: float, n_samples: int, seed: int,
                       config: Optional[CertifierConfig] = None) -> HolderReport:
    """A_s against prefactor * (E~ Z_adj(s))^gamma, both by Monte Carlo.

    Raises:
        ParameterError: If the tilt argument leaves [-1, 1]
    """
    prefactor = holder_prefactor(s, params)
    moment = fractional_moment(s, params.gamma, params.beta, eps, n_samples, seed, config)
    tilted = tilted_expectation(s, params, eps, n_samples, seed, "shifted", config)
    rhs = prefactor * tilted.value ** params.gamma
    rhs_stderr = prefactor * params.gamma * tilted.value ** (params.gamma - 1.0) * tilted.stderr
    report = HolderReport(s=s, moment=moment, tilted=tilted, prefactor=prefactor, rhs=rhs,
                          rhs_stderr=rhs_stderr, c_m=gaussian_c_m())
    logger.info(f"Hölder check s={s}: A_s={moment.value:.6e} vs {rhs:.6e} -> {report.holds}")
    return report


@dataclass
class CBetaFit:
    """C_beta = mean of (n + 1)^2 E Ž_adj(n) over a window of sizes."""
    value: float
    stderr: float
    sizes: List[int] = field(default_factory=list)
    scaled: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def annealed_zcheck(beta: float, eps: float, n_max: int,
                    config: Optional[CertifierConfig] = None) -> np.ndarray:
    """E Ž_adj(n) for n = 1..n_max (index n - 1); E Ž_adj(1) = 0."""
    config = config or get_default_certifier_config()
    values = np.exp(_annealed_lattice_logs(beta, eps, n_max, config, no_double_return=True))
    values[0] = 0.0
    return values


def fit_c_beta(beta: float, eps: float, n_range: Optional[Tuple[int, int]] = None,
               config: Optional[CertifierConfig] = None) -> CBetaFit:
    """Fit the n^{-2} decay constant of the annealed no-double-return partition."""
    config = config or get_default_certifier_config()
    low, high = n_range or config.c_beta_range
    validate_size(low, 2, "n_range")
    if high <= low:
        raise ParameterError(f"Empty size window [{low}, {high}]", "n_range")
    values = annealed_zcheck(beta, eps, high, config)
    sizes = np.arange(low, high + 1)
    scaled = (sizes + 1.0) ** 2 * values[sizes - 1]
    stderr = float(scaled.std(ddof=1) / math.sqrt(scaled.size))
    return CBetaFit(value=float(scaled.mean()), stderr=stderr, sizes=sizes.tolist(),
                    scaled=scaled.tolist())
