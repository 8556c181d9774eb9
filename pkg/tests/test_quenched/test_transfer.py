"""Tests for the grid transfer operator against exact enumeration."""

import math

import numpy as np
import pytest

from src.config import DEFAULT_ORACLE_RADIUS, TransferConfig
from src.core.disorder import sample_disorder
from src.core.potential import GaussianBondPotential
from src.models.params import ModelParams
from src.models.results import METHOD_TRANSFER
from src.models.validation import ValidationError
from src.partition.enumeration import log_polynomial, partition_enumerate
from src.quenched.base import GridInadequacyError
from src.quenched.grid import TransferGrid
from src.quenched.transfer import (
    ROUNDOFF_ERROR,
    RefinementReport,
    TransferOperator,
    TransferZCheck,
    adequate_grid,
    free_field_radius,
    grid_refinement,
    polynomial_degree,
    suggest_radius,
    transfer_log_partition,
)
from src.renewal.table import EnumerationZCheck


class TestSuggestRadius:
    """Test cases for suggest_radius."""

    def test_minimum(self):
        """Test the minimum radius for a short lattice."""
        assert suggest_radius(np.ones(3)) >= TransferConfig().min_radius

    def test_grows_with_size(self):
        """Test that longer lattices need a wider grid."""
        assert suggest_radius(np.ones(12)) > suggest_radius(np.ones(6))

    def test_clipped(self):
        """Test the spacing cap for a long lattice on a small grid."""
        assert suggest_radius(np.ones(200), grid_size=64) == pytest.approx(0.4 * 32)


class TestAdequateGrid:
    """Test cases for free_field_radius and adequate_grid."""

    def test_radius_not_clipped(self):
        """Test that the free-field radius ignores the point count."""
        assert free_field_radius(np.ones(201)) > 0.4 * 32
        assert free_field_radius(np.ones(41)) == pytest.approx(
            suggest_radius(np.ones(41), grid_size=4096))

    def test_default_size(self):
        """Test the configured point count for a short lattice."""
        grid = adequate_grid(np.ones(9))
        assert grid.size == TransferConfig().grid_size
        assert grid.radius == pytest.approx(free_field_radius(np.ones(9)))

    def test_grows_for_long_lattice(self):
        """Test more points once the radius outgrows the spacing."""
        weights = np.ones(41)
        grid = adequate_grid(weights)
        assert grid.size > TransferConfig().grid_size
        assert grid.spacing <= TransferConfig().max_spacing + 1e-12

    def test_finer_for_large_weights(self):
        """Test a finer spacing when some weight exceeds one."""
        weights = np.ones(9)
        weights[4] = 16.0
        grid = adequate_grid(weights, TransferConfig(radius=8.0, grid_size=64))
        assert grid.spacing <= 0.4 / 4.0 + 1e-12

    def test_cap(self):
        """Test the error once the point count would pass the cap."""
        with pytest.raises(GridInadequacyError, match="cap") as excinfo:
            adequate_grid(np.ones(201), TransferConfig(max_grid_size=1024))
        assert excinfo.value.operation == "grid_sizing"
        assert excinfo.value.required_radius == pytest.approx(free_field_radius(np.ones(201)))

    def test_explicit_radius(self):
        """Test that a configured radius is used as given."""
        grid = adequate_grid(np.ones(9), TransferConfig(radius=10.0))
        assert grid.radius == 10.0


class TestGridRefinement:
    """Test cases for grid_refinement."""

    def test_order(self):
        """Test an observed order of at least two under grid doubling."""
        params = ModelParams(beta=0.0, eps=1.0, n=6)
        exact = partition_enumerate(params).log_value
        report = grid_refinement(params, exact, TransferGrid(64, 24.0))
        assert report.fine_error < report.coarse_error
        assert report.order >= 2.0
        assert report.to_dict()["size"] == 64

    def test_roundoff_floor(self):
        """Test that a fine error below roundoff does not blow up the order."""
        report = RefinementReport(size=64, radius=8.0, coarse_error=1e-9, fine_error=0.0)
        assert report.order == pytest.approx(math.log2(1e-9 / ROUNDOFF_ERROR))


class TestTransferPartition:
    """Test cases for transfer_log_partition and sweeps."""

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_matches_enumeration(self, n):
        """Test the non-random model against enumeration."""
        params = ModelParams(beta=0.0, eps=0.7, n=n)
        exact = partition_enumerate(params).log_value
        result = transfer_log_partition(params)
        assert result.method == METHOD_TRANSFER
        assert result.log_value == pytest.approx(exact, abs=1e-7)

    def test_matches_enumeration_with_disorder(self):
        """Test a disorder realization at beta = 0.5, eps = 1, n = 6."""
        params = ModelParams(beta=0.5, eps=1.0, n=6)
        disorder = sample_disorder(6, seed=11)
        exact = partition_enumerate(params, disorder).log_value
        result = transfer_log_partition(params, disorder)
        assert abs(math.expm1(result.log_value - exact)) < 1e-6
        assert result.seed == 11

    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0])
    @pytest.mark.parametrize("eps", [0.5, 2.0])
    def test_oracle_grid(self, beta, eps):
        """Test the fixed R = 8, G = 512 grid against enumeration at n = 8."""
        params = ModelParams(beta=beta, eps=eps, n=8)
        disorder = sample_disorder(8, seed=4) if beta > 0 else None
        exact = partition_enumerate(params, disorder).log_value
        grid = TransferGrid(512, DEFAULT_ORACLE_RADIUS)
        grid_log = transfer_log_partition(params, disorder, grid, audit=False).log_value
        assert abs(math.expm1(grid_log - exact)) < 1e-4

    def test_sweep_all_sizes(self):
        """Test that one sweep yields every size up to n_max."""
        operator = TransferOperator()
        grid = operator.grid_for(6)
        logs = operator.sweep(1.3, 6, grid=grid).lattice_log()[0]
        for n in range(1, 7):
            exact = partition_enumerate(ModelParams(beta=0.0, eps=1.3, n=n)).log_value
            assert logs[n - 1] == pytest.approx(exact, abs=1e-7)

    def test_batched_weights(self):
        """Test that a vector of atom weights matches separate sweeps."""
        operator = TransferOperator()
        grid = operator.grid_for(5)
        batch = operator.sweep(np.array([0.2, 1.0]), 5, grid=grid).lattice_log()
        single = operator.sweep(1.0, 5, grid=grid).lattice_log()
        np.testing.assert_allclose(batch[1], single[0])
        assert batch[0, -1] < batch[1, -1]

    def test_negative_weight(self):
        """Test that atom weights must be nonnegative."""
        with pytest.raises(ValidationError, match="nonnegative"):
            TransferOperator().sweep(-0.1, 3)

    def test_short_potential(self):
        """Test that a weighted potential must cover every term."""
        operator = TransferOperator(GaussianBondPotential(np.ones(4)))
        with pytest.raises(ValidationError, match="terms"):
            operator.sweep(1.0, 5, grid=TransferGrid(64, 6.0))

    def test_inadequate_grid(self):
        """Test the audit on a grid that truncates the free field."""
        operator = TransferOperator()
        with pytest.raises(GridInadequacyError) as info:
            operator.require_adequate(0.0, 10, TransferGrid(64, 2.0))
        assert info.value.required_radius > 2.0
        assert info.value.error_code == "GRID_INADEQUATE"

    def test_audit_passes_on_wide_grid(self):
        """Test a negligible boundary share on the suggested grid."""
        operator = TransferOperator()
        grid = operator.grid_for(6)
        assert operator.require_adequate(0.5, 6, grid) <= operator.config.audit_tolerance

    def test_size_one_rejected(self):
        """Test that the transfer partition needs n >= 2."""
        with pytest.raises(ValidationError):
            transfer_log_partition(ModelParams(beta=0.0, eps=1.0, n=1))


class TestTransferZCheck:
    """Test cases for coefficient tables from the transfer operator."""

    def test_degree(self):
        """Test the largest contact count of a segment."""
        assert polynomial_degree(2) == 0
        assert polynomial_degree(4) == 0
        assert polynomial_degree(5) == 1
        assert polynomial_degree(7) == 2

    def test_matches_enumeration(self):
        """Test Ž values against the enumeration provider."""
        transfer = TransferZCheck().all_log_coefficients(10)
        exact = EnumerationZCheck().all_log_coefficients(10)
        assert np.isneginf(transfer[1]).all()
        for length in (1, 3, 6, 10):
            for eps in (0.5, 1.0, 2.0):
                assert log_polynomial(transfer[length - 1], eps) == pytest.approx(
                    log_polynomial(exact[length - 1], eps), abs=1e-6)

    def test_label(self):
        """Test the provenance tag."""
        assert TransferZCheck().label == "transfer:gaussian"

    def test_inhomogeneous_rejected(self):
        """Test that a weighted potential cannot build a table."""
        with pytest.raises(ValidationError, match="homogeneous"):
            TransferZCheck(GaussianBondPotential(np.ones(8)))
