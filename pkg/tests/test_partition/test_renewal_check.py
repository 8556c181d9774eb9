"""Tests for the renewal identity and the boundary convention."""

import pytest

from src.core.disorder import sample_disorder
from src.partition.base import ALL_CONVENTIONS, DEFAULT_CONVENTION, BoundaryConvention, EnumerationLimitError
from src.partition.renewal_check import renewal_identity_check, select_boundary_convention


class TestRenewalIdentity:
    """Test cases for renewal_identity_check."""

    def test_n3_eps_half(self):
        """Test the residual at n = 3, eps = 0.5."""
        assert renewal_identity_check(0.5, 3) < 1e-12

    @pytest.mark.parametrize("eps", [0.1, 0.5, 1.0, 2.0])
    def test_all_sizes(self, eps):
        """Test residuals up to n = 14 for the resolved convention."""
        for n in range(2, 15):
            assert renewal_identity_check(eps, n) < 1e-12

    def test_eps_zero(self):
        """Test that Z = Ž when no contacts are allowed."""
        assert renewal_identity_check(0.0, 6) < 1e-12

    def test_random_weights(self):
        """Test that the decomposition holds for a disorder realization."""
        disorder = sample_disorder(12, seed=8)
        assert renewal_identity_check(0.9, 10, disorder, beta=0.5) < 1e-12

    def test_size_limit(self):
        """Test the n <= 20 limit."""
        with pytest.raises(EnumerationLimitError, match="n <= 20"):
            renewal_identity_check(0.5, 21)

    def test_wrong_convention_fails(self):
        """Test that including the boundary-adjacent sites breaks the identity."""
        wrong = BoundaryConvention(exclude_first=False, exclude_last=False)
        assert renewal_identity_check(1.0, 6, convention=wrong) > 1e-6


class TestConventionSelection:
    """Test cases for select_boundary_convention."""

    def test_unique_convention(self):
        """Test that exactly the default convention passes."""
        assert select_boundary_convention(n_max=8) == DEFAULT_CONVENTION

    def test_candidates(self):
        """Test candidate sites under each convention."""
        assert DEFAULT_CONVENTION.candidates(7) == (2, 3, 4)
        assert BoundaryConvention(False, False).candidates(7) == (1, 2, 3, 4, 5)
        assert len(ALL_CONVENTIONS) == 4
        assert DEFAULT_CONVENTION.label == "first:exclude,last:exclude"
