"""Tests for reproducible disorder sampling."""

import numpy as np
import pytest

from src.core.disorder import (
    disorder_weights,
    realization_generator,
    sample_disorder,
    sample_disorder_batch,
)
from src.models.validation import ValidationError


class TestSampling:
    """Test cases for the charge sampler."""

    def test_reproducible(self):
        """Test that (seed, stream) fixes the realization."""
        first = sample_disorder(20, seed=7, stream=3)
        second = sample_disorder(20, seed=7, stream=3)
        np.testing.assert_array_equal(first.omega, second.omega)
        assert first.n == 20
        assert first.omega.size == 21

    def test_streams_differ(self):
        """Test that different streams give different charges."""
        a = sample_disorder(10, seed=7, stream=0).omega
        b = sample_disorder(10, seed=7, stream=1).omega
        assert not np.array_equal(a, b)

    def test_prefix_stable(self):
        """Test that a longer draw extends a shorter one from the same stream."""
        short = sample_disorder(5, seed=11).omega
        long = sample_disorder(50, seed=11).omega
        np.testing.assert_array_equal(short, long[:6])

    def test_moments(self):
        """Test mean 0 and variance 1 over 10^6 draws."""
        omega = sample_disorder(999_999, seed=2024).omega
        assert abs(omega.mean()) < 0.004
        assert abs(omega.var() - 1.0) < 0.005

    def test_mean_shift(self):
        """Test that the tilted law has mean -0.3."""
        omega = sample_disorder(999_999, seed=2024, mean_shift=-0.3).omega
        assert abs(omega.mean() + 0.3) < 0.004

    def test_batch_matches_streams(self):
        """Test that batch rows equal the individual streams."""
        batch = sample_disorder_batch(8, seed=5, n_samples=3, first_stream=2)
        for row, stream in zip(batch, range(2, 5)):
            np.testing.assert_array_equal(row, sample_disorder(8, 5, stream=stream).omega)

    def test_invalid_seed(self):
        """Test that negative seeds are rejected."""
        with pytest.raises(ValidationError, match="Seed"):
            realization_generator(-1)

    def test_weights(self):
        """Test b_i = exp(beta * omega_i)."""
        disorder = sample_disorder(4, seed=1)
        np.testing.assert_allclose(disorder_weights(disorder, 0.3), np.exp(0.3 * disorder.omega))
        assert disorder_weights(disorder, 0.0).tolist() == [1.0] * 5
