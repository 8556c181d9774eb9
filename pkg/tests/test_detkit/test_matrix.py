"""Tests for the bilaplacian matrix and its pinned reductions."""

import numpy as np
import pytest

from src.detkit.matrix import bandwidth, build_matrix, full_bands, reduced_bands
from src.models.validation import ValidationError


class TestBuildMatrix:
    """Test cases for build_matrix."""

    def test_n2_unit_weights(self):
        """Test the 1x1 matrix [b_0 + 4 b_1 + b_2]."""
        assert build_matrix(np.ones(3)).tolist() == [[6.0]]

    def test_n3_unit_weights(self):
        """Test the 2x2 matrix at unit weights."""
        assert build_matrix(np.ones(4)).tolist() == [[6.0, -4.0], [-4.0, 6.0]]

    def test_entries_general_weights(self):
        """Test diagonal and off-diagonal entries in terms of b."""
        b = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        matrix = build_matrix(b)
        assert matrix[0, 0] == b[0] + 4 * b[1] + b[2]
        assert matrix[1, 2] == -2 * (b[2] + b[3])
        assert matrix[0, 2] == b[2]
        assert matrix[0, 3] == 0.0
        np.testing.assert_array_equal(matrix, matrix.T)

    def test_single_pin_n6(self):
        """Test the 4x4 matrix left after pinning site 4 at n = 6."""
        b = np.arange(1.0, 8.0)
        full = build_matrix(b)
        pinned = build_matrix(b, [4])
        assert pinned.shape == (4, 4)
        keep = [0, 1, 2, 4]
        np.testing.assert_array_equal(pinned, full[np.ix_(keep, keep)])

    def test_empty_matrix(self):
        """Test n = 1 and fully pinned interiors."""
        assert build_matrix(np.ones(2)).shape == (0, 0)
        assert build_matrix(np.ones(4), [1, 2]).shape == (0, 0)

    def test_pin_out_of_range(self):
        """Test rejection of pins outside 1..n-1."""
        with pytest.raises(ValidationError, match="outside interior range"):
            build_matrix(np.ones(5), [4])


class TestBands:
    """Test cases for band extraction."""

    def test_full_bands_lengths(self):
        """Test diagonal lengths n-1, n-2, n-3."""
        diag, off1, off2 = full_bands(np.ones(8))
        assert (diag.size, off1.size, off2.size) == (6, 5, 4)

    @pytest.mark.parametrize("pins", [(), (3,), (2, 3), (1, 5, 6), (2, 4, 6)])
    def test_reduced_bands_match_dense(self, pins, rng):
        """Test that the reduced diagonals reproduce the dense pinned matrix."""
        b = np.exp(rng.uniform(-1, 1, 9))
        diag, off1, off2 = reduced_bands(b, pins)
        dense = build_matrix(b, pins)
        np.testing.assert_allclose(diag, np.diag(dense))
        np.testing.assert_allclose(off1, np.diag(dense, 1))
        np.testing.assert_allclose(off2, np.diag(dense, 2))

    def test_pinned_bandwidth_stays_two(self, rng):
        """Test that deleting rows keeps the matrix pentadiagonal."""
        b = np.exp(rng.uniform(-1, 1, 12))
        assert bandwidth(build_matrix(b, [3, 7])) <= 2
        assert bandwidth(np.eye(3)) == 0
