"""Reproducible sampling of Gaussian charges."""

import logging

import numpy as np

from src.models.params import DisorderVector
from src.models.validation import validate_seed, validate_size


logger = logging.getLogger(__name__)


def realization_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed on (seed, stream).

    Each stream is an independent Philox sequence, so realization i can be
    drawn by any worker without reference to the others.
    """
    validate_seed(seed)
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(sequence))


def sample_disorder(n: int, seed: int, mean_shift: float = 0.0,
                    stream: int = 0) -> DisorderVector:
    """Sample charges omega_0..omega_n.

    Args:
        n: Lattice size (n + 1 charges are drawn)
        seed: 64-bit master seed
        mean_shift: Mean of every charge (0 for the base law, -lambda when tilted)
        stream: Realization index derived from the master seed

    Returns:
        DisorderVector reproducible from (seed, stream, mean_shift, n)
    """
    validate_size(n, 1)
    rng = realization_generator(seed, stream)
    omega = rng.standard_normal(n + 1) + mean_shift
    return DisorderVector(omega=omega, seed=int(seed), mean_shift=float(mean_shift),
                          stream=int(stream))


def sample_disorder_batch(n: int, seed: int, n_samples: int,
                          mean_shift: float = 0.0, first_stream: int = 0) -> np.ndarray:
    """Charges of n_samples consecutive streams as an (n_samples, n + 1) array."""
    validate_size(n_samples, 1, "n_samples")
    rows = [
        sample_disorder(n, seed, mean_shift, stream).omega
        for stream in range(first_stream, first_stream + n_samples)
    ]
    return np.vstack(rows)


def disorder_weights(disorder: DisorderVector, beta: float) -> np.ndarray:
    """Bond weights b_i = exp(beta * omega_i)."""
    return disorder.weights(beta)
