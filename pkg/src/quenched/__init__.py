"""Transfer-operator partitions, disorder averages and annealed comparisons."""

from .base import BisectionError, GridInadequacyError
from .estimators import (
    JensenReport,
    annealed_free_energy,
    annealed_log_partition,
    annealed_table,
    critical_point_bisect,
    jensen_check,
    quenched_free_energy,
)
from .grid import TransferGrid
from .io import FREE_ENERGY_COLUMNS, PHASE_COLUMNS, free_energy_row, phase_report, phase_rows
from .sandwich import AnnealedBounds, SandwichReport, annealed_partition_bounds, sandwich_check
from .transfer import (
    RefinementReport,
    TransferOperator,
    TransferSweep,
    TransferZCheck,
    adequate_grid,
    free_field_radius,
    grid_refinement,
    polynomial_degree,
    suggest_radius,
    transfer_log_partition,
)

__all__ = [
    'BisectionError',
    'GridInadequacyError',
    'JensenReport',
    'annealed_free_energy',
    'annealed_log_partition',
    'annealed_table',
    'critical_point_bisect',
    'jensen_check',
    'quenched_free_energy',
    'TransferGrid',
    'FREE_ENERGY_COLUMNS',
    'PHASE_COLUMNS',
    'free_energy_row',
    'phase_report',
    'phase_rows',
    'AnnealedBounds',
    'SandwichReport',
    'annealed_partition_bounds',
    'sandwich_check',
    'RefinementReport',
    'TransferOperator',
    'TransferSweep',
    'TransferZCheck',
    'adequate_grid',
    'free_field_radius',
    'grid_refinement',
    'polynomial_degree',
    'suggest_radius',
    'transfer_log_partition',
]
