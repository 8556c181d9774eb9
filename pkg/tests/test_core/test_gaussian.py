"""Tests for the normal moment generating function."""

import math

import pytest

from src.core.base import OutOfRangeError
from src.core.gaussian import log_mgf, log_mgf_second_derivative, mgf
from src.models.validation import ValidationError


class TestMgf:
    """Test cases for mgf and log_mgf."""

    def test_mgf_at_zero(self):
        """Test M(0) = 1."""
        assert mgf(0.0) == 1.0

    def test_mgf_at_one(self):
        """Test M(1) = e^{1/2}."""
        assert mgf(1.0) == pytest.approx(1.6487212707, rel=1e-10)

    def test_mgf_symmetric(self):
        """Test M(t) = M(-t)."""
        assert mgf(-0.7) == mgf(0.7)
        assert log_mgf(-3.0) == 4.5

    def test_mgf_overflow(self):
        """Test that arguments beyond the float range raise."""
        with pytest.raises(OutOfRangeError, match="exceeds the floating-point range"):
            mgf(40.0)
        assert log_mgf(40.0) == 800.0

    def test_non_finite_argument(self):
        """Test rejection of infinite arguments."""
        with pytest.raises(ValidationError, match="finite"):
            log_mgf(math.inf)

    def test_second_derivative_is_one(self):
        """Test (log M)'' = 1 for the normal law."""
        for t in (-1.0, 0.0, 0.5):
            assert log_mgf_second_derivative(t) == pytest.approx(1.0, abs=1e-6)
