"""Tests for the T_n statistic, the delocalized partition and super-additivity."""

import math

import numpy as np
import pytest

from src.core.disorder import sample_disorder
from src.models.params import ModelParams
from src.models.validation import ValidationError
from src.partition.enumeration import partition_enumerate
from src.partition.statistics import log_partition_delocalized, superadditivity_check, tn_statistic


class TestTnStatistic:
    """Test cases for tn_statistic."""

    def test_beta_zero(self):
        """Test T_n = n (n+1) / 2 with unit weights."""
        disorder = sample_disorder(50, seed=1)
        stat = tn_statistic(0.0, 50, disorder)
        assert stat.value == pytest.approx(50 * 51 / 2 / 51 ** 2)
        assert stat.limit == 0.5
        assert stat.stderr == 0.0

    def test_law_of_large_numbers(self):
        """Test (n+1)^{-2} T_n within 3 sigma of M(-beta)^2 / 2 at n = 10^5."""
        disorder = sample_disorder(100_000, seed=77)
        stat = tn_statistic(0.5, 100_000, disorder)
        assert stat.limit == pytest.approx(0.5 * math.exp(0.25))
        assert stat.deviation_in_sigma() < 3.0

    def test_bracket_bounds(self):
        """Test T_n <= bracket <= n^2 T_n."""
        for seed in range(5):
            stat = tn_statistic(1.0, 40, sample_disorder(40, seed=seed))
            assert stat.bracket_within_bounds
            assert stat.to_dict()["bracket_within_bounds"] is True


class TestDelocalizedPartition:
    """Test cases for log_partition_delocalized."""

    def test_matches_enumeration(self):
        """Test the closed form against enumeration at eps = 0."""
        disorder = sample_disorder(9, seed=4)
        closed = log_partition_delocalized(disorder, 0.8)
        exact = partition_enumerate(ModelParams(beta=0.8, eps=0.0, n=9), disorder)
        assert closed.log_value == pytest.approx(exact.log_value, rel=1e-12)
        assert closed.method == "closed_form"

    def test_size_required(self):
        """Test that a size or a realization must be given."""
        with pytest.raises(ValidationError, match="size or a disorder"):
            log_partition_delocalized(None, 0.0)

    def test_free_energy_vanishes(self):
        """Test |(1/n) log Z^{beta,0}| < 10^{-3} at n = 10^6."""
        n = 1_000_000
        disorder = sample_disorder(n, seed=31)
        value = log_partition_delocalized(disorder, 0.5)
        assert abs(value.log_value / n) < 1e-3

    def test_decay_with_size(self):
        """Test that |(1/n) log Z^{0,0}| decays like (log n) / n."""
        magnitudes = []
        for n in (1_000, 10_000, 100_000):
            value = log_partition_delocalized(None, 0.0, n)
            assert abs(value.log_value) < 2.0 * math.log(n) + 1.0
            magnitudes.append(abs(value.log_value / n))
        assert magnitudes[0] > magnitudes[1] > magnitudes[2]


class TestSuperadditivity:
    """Test cases for superadditivity_check."""

    @pytest.mark.parametrize("eps", [0.3, 1.0, 2.5])
    def test_holds_non_random(self, eps):
        """Test non-negative gaps without disorder."""
        report = superadditivity_check(eps, 10)
        assert report.holds
        assert report.splits == list(range(2, 9))
        assert report.argmin in report.splits

    def test_holds_random(self):
        """Test non-negative gaps for a realization."""
        disorder = sample_disorder(12, seed=2)
        assert superadditivity_check(0.8, 12, disorder, beta=0.7).holds

    def test_small_n_rejected(self):
        """Test that N must allow a split."""
        with pytest.raises(ValidationError, match="at least 4"):
            superadditivity_check(1.0, 3)
