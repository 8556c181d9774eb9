"""Pytest configuration and fixtures."""

import pytest
import tempfile
from pathlib import Path

import numpy as np


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def rng():
    """Seeded generator for random test instances."""
    return np.random.default_rng(12345)


@pytest.fixture
def unit_weights():
    """Weights b_0..b_6 of the non-random model at n = 6."""
    return np.ones(7)


@pytest.fixture
def random_weights(rng):
    """Disorder weights exp(beta * omega) at beta = 0.5, n = 8."""
    return np.exp(0.5 * rng.standard_normal(9))


@pytest.fixture
def small_eps_values():
    """Rewards used by the identity checks."""
    return [0.1, 0.5, 1.0, 2.0]
