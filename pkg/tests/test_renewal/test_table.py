"""Tests for no-double-return tables and the tail fit."""

import math

import numpy as np
import pytest

from src.config import LOG_SQRT_2PI, RenewalConfig
from src.models.validation import ValidationError
from src.renewal.base import FitError
from src.renewal.table import EnumerationZCheck, RenewalTable, build_table, fit_tail, tail_window


@pytest.fixture(scope="module")
def table():
    """Non-random table up to n = 12."""
    return build_table(EnumerationZCheck(), n_max=12)


class TestEnumerationZCheck:
    """Test cases for the enumeration provider."""

    def test_short_segments(self):
        """Test Ž_{0,1} = 1/sqrt(2 pi) and Ž_{0,2} = 0."""
        provider = EnumerationZCheck()
        np.testing.assert_allclose(provider.log_coefficients(1), [-LOG_SQRT_2PI])
        assert np.isneginf(provider.log_coefficients(2)).all()

    def test_segments_without_candidates(self, table):
        """Test n = 3, 4 where no contact site is admissible."""
        zcheck = table.zcheck(0.7)
        assert zcheck[2] == pytest.approx(1.0 / (2 * math.pi * math.sqrt(6.0)), rel=1e-12)
        assert zcheck[3] == pytest.approx(1.0 / (2 * math.pi * math.sqrt(20.0)), rel=1e-12)

    def test_label(self):
        """Test the provenance tag."""
        assert EnumerationZCheck().label == "enumeration"


class TestRenewalTable:
    """Test cases for RenewalTable."""

    def test_shape(self, table):
        """Test table size and zero entry at n = 2."""
        assert table.n_max == 12
        assert table.source == "enumeration"
        assert not table.fitted
        assert table.zcheck(1.0)[1] == 0.0

    def test_monotone_in_eps(self, table):
        """Test that entries grow with the reward."""
        low, high = table.zcheck(0.5), table.zcheck(2.0)
        assert np.all(high[4:] > low[4:])
        np.testing.assert_allclose(high[:4], low[:4])

    def test_unevaluated(self, table):
        """Test that log_zcheck needs an eps."""
        with pytest.raises(ValidationError, match="not evaluated"):
            table.log_zcheck()

    def test_at(self, table):
        """Test evaluation with a positive tail constant."""
        fitted = table.at(1.0)
        assert fitted.fitted
        assert fitted.eps == 1.0
        assert fitted.tail_constant > 0
        assert fitted.tail_stderr >= 0
        assert not table.fitted

    def test_at_rejects_zero(self, table):
        """Test that eps must be positive."""
        with pytest.raises(ValidationError):
            table.at(0.0)

    def test_nan_rejected(self):
        """Test NaN coefficients."""
        with pytest.raises(ValidationError, match="NaN"):
            RenewalTable(coefficients=[[0.0], [np.nan]])

    def test_nonpositive_tail(self):
        """Test that a fitted tail constant must be positive."""
        with pytest.raises(ValidationError, match="positive"):
            RenewalTable(coefficients=[[0.0]], eps=1.0, tail_constant=0.0)

    def test_to_dict(self, table):
        """Test serialization of an evaluated table."""
        data = table.at(0.8).to_dict()
        assert data["n_max"] == 12
        assert data["eps"] == 0.8
        assert len(data["log_zcheck"]) == 12
        assert table.to_dict()["log_zcheck"] is None


class TestTailFit:
    """Test cases for tail_window and fit_tail."""

    def test_window(self):
        """Test the top third of 3..24."""
        assert tail_window(24, 1.0 / 3.0).tolist() == list(range(17, 25))

    def test_window_minimum(self):
        """Test that at least two sizes enter the fit."""
        assert tail_window(5, 0.01).tolist() == [4, 5]

    def test_fit_matches_mean(self, table):
        """Test C as the mean of n^2 eps^2 Ž over the window."""
        constant, stderr = fit_tail(table, 1.5)
        sizes = tail_window(table.n_max, table.tail_fraction)
        values = sizes ** 2 * 1.5 ** 2 * table.zcheck(1.5)[sizes - 1]
        assert constant == pytest.approx(values.mean())
        assert stderr >= 0

    def test_short_table(self):
        """Test the minimum table size."""
        short = RenewalTable(coefficients=[[0.0]] * 4)
        with pytest.raises(FitError, match="n_max >= 5"):
            fit_tail(short, 1.0)

    def test_build_uses_config(self):
        """Test n_max and fraction taken from the configuration."""
        config = RenewalConfig(n_max=8, tail_fraction=0.5)
        built = build_table(EnumerationZCheck(), config=config, eps=1.0)
        assert built.n_max == 8
        assert built.tail_fraction == 0.5
        assert built.fitted

    def test_build_too_small(self):
        """Test the minimum truncation."""
        with pytest.raises(ValidationError):
            build_table(EnumerationZCheck(), n_max=4)
