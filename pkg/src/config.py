"""Configuration settings for the Laplacian pinning toolkit."""

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class EnumerationConfig:
    """Configuration for contact-set enumeration."""
    max_size: int = 24
    block_size: int = 4096
    threads: int = 1


@dataclass
class QuadratureConfig:
    """Configuration for Gauss-Hermite averages over a single charge."""
    order: int = 64
    max_order: int = 512
    tolerance: float = 1e-10


@dataclass
class TransferConfig:
    """Configuration for the grid transfer operator."""
    grid_size: int = 512
    radius: Optional[float] = None  # None selects the radius from the covariance
    radius_factor: float = 9.0
    min_radius: float = 4.0
    audit_tolerance: float = 1e-12
    audit_band: float = 0.1
    max_spacing: float = 0.4
    max_grid_size: int = 2048


@dataclass
class RenewalConfig:
    """Configuration for renewal tables and root solves."""
    n_max: int = 24
    root_tolerance: float = 1e-14
    tail_fraction: float = 1.0 / 3.0
    interpolation_radius: float = 1.5
    delta_min: float = 1e-3
    delta_max: float = 1e-1
    delta_points: int = 20


@dataclass
class MonteCarloConfig:
    """Configuration for disorder averages."""
    n_samples: int = 256
    threads: int = 1


@dataclass
class CertifierConfig:
    """Configuration for the fractional-moment certifier."""
    enumeration_cap: int = 14
    n_samples: int = 512
    c_beta_range: tuple = (10, 20)
    threads: int = 1
    transfer: TransferConfig = field(default_factory=TransferConfig)


# Default configuration values
DEFAULT_THREADS_ENV = "PINNING_THREADS"
DEFAULT_SEED = 20240601
DEFAULT_ENUMERATION_CAP = 24
DEFAULT_PIVOT_FLOOR = 1e-300
DEFAULT_SIGMA_LEVEL = 3.0  # standard errors required before a statistical claim
DEFAULT_ORACLE_RADIUS = 8.0  # radius of the transfer-vs-enumeration oracle grid
DEFAULT_FREE_ENERGY_FLOOR = 1e-6

LOG_SQRT_2PI = 0.5 * float(np.log(2.0 * np.pi))


def get_default_threads() -> int:
    """Get the default worker count from the environment."""
    raw = os.environ.get(DEFAULT_THREADS_ENV, "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def get_default_enumeration_config() -> EnumerationConfig:
    """Get default enumeration configuration."""
    return EnumerationConfig(
        max_size=DEFAULT_ENUMERATION_CAP,
        block_size=4096,
        threads=get_default_threads()
    )


def get_default_quadrature_config() -> QuadratureConfig:
    """Get default quadrature configuration."""
    return QuadratureConfig()


def get_default_transfer_config() -> TransferConfig:
    """Get default transfer-operator configuration."""
    return TransferConfig()


def get_default_renewal_config() -> RenewalConfig:
    """Get default renewal configuration."""
    return RenewalConfig()


def get_default_monte_carlo_config() -> MonteCarloConfig:
    """Get default Monte Carlo configuration."""
    return MonteCarloConfig(n_samples=256, threads=get_default_threads())


def get_default_certifier_config() -> CertifierConfig:
    """Get default certifier configuration."""
    return CertifierConfig(threads=get_default_threads())
