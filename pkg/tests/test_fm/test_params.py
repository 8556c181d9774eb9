"""Tests for certifier parameter selection."""

import math

import pytest

from src.fm.base import ParameterError
from src.fm.params import FMParams, choose_params
from src.models.validation import ValidationError


class TestChooseParams:
    """Test cases for choose_params."""

    def test_reference_values(self):
        """Test beta = 0.5, c = 0.1."""
        params = choose_params(0.5, 0.1)
        assert params.k == 48
        assert params.delta == pytest.approx(0.020714, abs=1e-6)
        assert params.lam == pytest.approx(0.13101, abs=1e-5)
        assert params.gamma == pytest.approx(0.74168, abs=1e-5)

    def test_formulas(self):
        """Test the closed forms at another point."""
        beta, c = 0.3, 0.05
        scale = math.log(1 + 1 / beta) ** 2
        params = choose_params(beta, c)
        assert params.k == int(scale / (c * beta ** 2))
        assert params.delta == pytest.approx(c * beta ** 2 / scale)
        assert params.lam == pytest.approx(math.sqrt(c) * beta / scale)
        assert params.gamma == pytest.approx(1 - 1 / math.log(params.k))

    def test_sign_margin(self):
        """Test that delta < beta lam / 2 below c = 1/4."""
        params = choose_params(0.5, 0.2)
        assert params.sign_margin < 0
        assert params.within_proviso
        assert params.to_dict()["sign_margin"] == params.sign_margin

    @pytest.mark.parametrize("c", [0.26, 0.3, 1.0])
    def test_large_shift_rejected(self, c):
        """Test c >= 1/4."""
        with pytest.raises(ParameterError, match="1/4"):
            choose_params(0.1, c)

    def test_zero_disorder_rejected(self):
        """Test that beta must be positive."""
        with pytest.raises(ParameterError, match="beta"):
            choose_params(0.0, 0.1)

    def test_short_block_rejected(self):
        """Test k < 3 at strong disorder."""
        with pytest.raises(ParameterError, match="Block length"):
            choose_params(2.0, 0.2)

    def test_is_validation_error(self):
        """Test that parameter errors map onto invalid input."""
        assert issubclass(ParameterError, ValidationError)
        with pytest.raises(ValidationError):
            choose_params(0.5, -0.1)


class TestFMParams:
    """Test cases for FMParams."""

    def test_tilt_argument(self):
        """Test lam gamma / (1 - gamma)."""
        params = FMParams(beta=0.5, c=0.1, delta=0.01, k=10, lam=0.2, gamma=0.6)
        assert params.tilt_argument == pytest.approx(0.3)
        assert params.within_proviso

    def test_outside_proviso(self):
        """Test a tilt argument above one."""
        params = FMParams(beta=0.5, c=0.1, delta=0.01, k=10, lam=0.9, gamma=0.6)
        assert not params.within_proviso

    def test_invalid_gamma(self):
        """Test gamma outside (0, 1)."""
        with pytest.raises(ParameterError, match="gamma"):
            FMParams(beta=0.5, c=0.1, delta=0.01, k=10, lam=0.2, gamma=1.0)
