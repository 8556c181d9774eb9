"""Tests for fractional moments and their deterministic bounds."""

import math

import numpy as np
import pytest

from src.config import CertifierConfig, TransferConfig
from src.core.gaussian import log_mgf
from src.fm.base import ParameterError
from src.fm.moments import (
    annealed_moment,
    annealed_zcheck,
    fit_c_beta,
    fractional_moment,
    gaussian_c_m,
    holder_bound_check,
    holder_prefactor,
    log_moment_bounds,
    moment_bound,
    subadditive_bound,
    tilt_weight_mean,
    tilted_expectation,
)
from src.fm.params import FMParams
from src.models.results import METHOD_ENUMERATION, METHOD_MONTE_CARLO, METHOD_TRANSFER
from src.partition.base import EnumerationLimitError


BETA = 0.5
EPS = 0.8
PARAMS = FMParams(beta=BETA, c=0.1, delta=0.01, k=6, lam=0.2, gamma=0.7)


@pytest.fixture
def small_config():
    """Certifier configuration with a low cap and a coarse grid."""
    return CertifierConfig(enumeration_cap=8, n_samples=16, c_beta_range=(6, 10),
                           transfer=TransferConfig(grid_size=256))


class TestFractionalMoment:
    """Test cases for fractional_moment and subadditive_bound."""

    def test_size_zero(self):
        """Test A_0 = M(gamma beta / 2)."""
        estimate = fractional_moment(0, 0.7, BETA, EPS, 10, 1)
        assert estimate.value == pytest.approx(math.exp(0.5 * (0.35 * BETA) ** 2))
        assert estimate.method == METHOD_ENUMERATION

    def test_jensen_on_samples(self, small_config):
        """Test mean(Z^gamma) <= mean(Z)^gamma on the same realizations."""
        fractional = fractional_moment(4, 0.7, BETA, EPS, 32, 5, small_config)
        first = fractional_moment(4, 1.0, BETA, EPS, 32, 5, small_config)
        assert fractional.value <= first.value ** 0.7 + 1e-15
        assert fractional.method == METHOD_MONTE_CARLO
        assert fractional.stderr > 0

    def test_mean_matches_annealed(self, small_config):
        """Test the gamma = 1 moment against the annealed sweep."""
        estimate = fractional_moment(3, 1.0, BETA, EPS, 2000, 9, small_config)
        exact = annealed_moment(3, BETA, EPS, small_config)
        assert abs(estimate.value - exact) < 4 * estimate.stderr

    def test_subadditive_dominates(self, small_config):
        """Test that the contact-set sum dominates realization by realization."""
        moment = fractional_moment(5, 0.7, BETA, EPS, 16, 2, small_config)
        bound = subadditive_bound(5, 0.7, BETA, EPS, 16, 2, small_config)
        assert bound.value >= moment.value

    def test_cap(self, small_config):
        """Test the enumeration cap."""
        with pytest.raises(EnumerationLimitError, match="cap"):
            fractional_moment(9, 0.7, BETA, EPS, 4, 1, small_config)

    def test_gamma_range(self):
        """Test gamma outside (0, 1]."""
        with pytest.raises(ParameterError, match="gamma"):
            fractional_moment(3, 1.5, BETA, EPS, 4, 1)


class TestTilt:
    """Test cases for the tilted measure."""

    def test_density_mean(self):
        """Test that the tilt density integrates to one."""
        estimate = tilt_weight_mean(4, 0.3, 4000, 17)
        assert abs(estimate.value - 1.0) < 4 * estimate.stderr

    def test_methods_agree(self, small_config):
        """Test the reweighted and exact tilted expectations."""
        weighted = tilted_expectation(3, PARAMS, EPS, 3000, 4, "weight", small_config)
        shifted = tilted_expectation(3, PARAMS, EPS, 3000, 4, "shifted", small_config)
        exact = tilted_expectation(3, PARAMS, EPS, method="exact", config=small_config)
        assert exact.method == METHOD_TRANSFER
        assert abs(weighted.value - exact.value) < 4 * weighted.stderr
        assert abs(shifted.value - exact.value) < 4 * shifted.stderr

    def test_unknown_method(self):
        """Test the tilt method choices."""
        with pytest.raises(ParameterError, match="tilt method"):
            tilted_expectation(3, PARAMS, EPS, 10, 1, "direct")

    def test_c_m(self):
        """Test C_M = 1/2 for Gaussian charges."""
        assert gaussian_c_m() == pytest.approx(0.5, abs=1e-6)

    def test_prefactor(self):
        """Test exp(n lam^2 gamma / (2 (1 - gamma))) with n = s + 1."""
        expected = math.exp(4 * 0.04 * 0.7 / 0.6)
        assert holder_prefactor(3, PARAMS) == pytest.approx(expected)

    def test_prefactor_proviso(self):
        """Test the tilt argument limit."""
        wide = FMParams(beta=BETA, c=0.1, delta=0.01, k=6, lam=0.9, gamma=0.6)
        with pytest.raises(ParameterError, match="outside"):
            holder_prefactor(3, wide)

    def test_holder_step(self, small_config):
        """Test the Hölder inequality on sampled moments."""
        report = holder_bound_check(3, PARAMS, EPS, 400, 6, small_config)
        assert report.holds
        assert report.c_m == pytest.approx(0.5, abs=1e-6)
        assert report.to_dict()["holds"] is True


class TestMomentBounds:
    """Test cases for log_moment_bounds and moment_bound."""

    def test_shape(self, small_config):
        """Test A_0 and the table length."""
        bounds = log_moment_bounds(PARAMS, EPS, 6, small_config)
        assert bounds.shape == (7,)
        assert bounds[0] == pytest.approx(log_mgf(0.5 * 0.7 * BETA))

    def test_dominates_jensen(self, small_config):
        """Test that no bound exceeds the Jensen value."""
        bounds = log_moment_bounds(PARAMS, EPS, 5, small_config)
        for s in range(1, 6):
            jensen = 0.7 * math.log(annealed_moment(s, BETA, EPS, small_config))
            assert bounds[s] <= jensen + 1e-9

    def test_bound_above_estimate(self, small_config):
        """Test that the bound sits above the sampled moment."""
        estimate = fractional_moment(4, 0.7, BETA, EPS, 200, 3, small_config)
        bound = moment_bound(4, PARAMS, EPS, small_config)
        assert estimate.value <= bound + 3 * estimate.stderr
        assert moment_bound(0, PARAMS, EPS) == pytest.approx(math.exp(log_mgf(0.175)))


class TestCBeta:
    """Test cases for annealed_zcheck and fit_c_beta."""

    def test_zcheck(self, small_config):
        """Test the vanishing first entry and positivity."""
        values = annealed_zcheck(BETA, EPS, 10, small_config)
        assert values[0] == 0.0
        assert np.all(values[2:] > 0)

    def test_fit(self, small_config):
        """Test the window and the positive constant."""
        fit = fit_c_beta(BETA, EPS, config=small_config)
        assert fit.sizes == list(range(6, 11))
        assert fit.value > 0
        assert len(fit.scaled) == 5

    def test_empty_window(self, small_config):
        """Test an empty size window."""
        with pytest.raises(ParameterError, match="window"):
            fit_c_beta(BETA, EPS, n_range=(8, 8), config=small_config)
