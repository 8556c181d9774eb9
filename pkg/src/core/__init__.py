"""Model conventions, disorder sampling and bond potentials."""

from .base import BondPotential, OutOfRangeError, QuadratureError
from .disorder import (
    disorder_weights,
    realization_generator,
    sample_disorder,
    sample_disorder_batch,
)
from .gaussian import log_mgf, log_mgf_second_derivative, mgf
from .potential import (
    AnnealedBondPotential,
    GaussianBondPotential,
    annealed_density,
    annealed_potential,
)

__all__ = [
    'BondPotential',
    'OutOfRangeError',
    'QuadratureError',
    'disorder_weights',
    'realization_generator',
    'sample_disorder',
    'sample_disorder_batch',
    'log_mgf',
    'log_mgf_second_derivative',
    'mgf',
    'AnnealedBondPotential',
    'GaussianBondPotential',
    'annealed_density',
    'annealed_potential',
]
