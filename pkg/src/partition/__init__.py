"""Exact partition functions, renewal identity and disorder statistics."""

from .base import (
    ALL_CONVENTIONS,
    DEFAULT_CONVENTION,
    BoundaryConvention,
    EnumerationLimitError,
    RenewalIdentityError,
    lattice_weights,
)
from .enumeration import (
    adjusted_partition,
    contact_log_coefficients,
    gray_code_masks,
    lattice_log_coefficients,
    log_polynomial,
    partition_enumerate,
    partition_no_double_return,
    segment_log_coefficients,
    segment_log_partition,
)
from .io import PARTITION_COLUMNS, partition_rows
from .renewal_check import renewal_identity_check, select_boundary_convention
from .statistics import (
    SuperadditivityReport,
    TnStatistic,
    log_partition_delocalized,
    superadditivity_check,
    tn_statistic,
)

__all__ = [
    'ALL_CONVENTIONS',
    'DEFAULT_CONVENTION',
    'BoundaryConvention',
    'EnumerationLimitError',
    'RenewalIdentityError',
    'lattice_weights',
    'adjusted_partition',
    'contact_log_coefficients',
    'gray_code_masks',
    'lattice_log_coefficients',
    'log_polynomial',
    'partition_enumerate',
    'partition_no_double_return',
    'segment_log_coefficients',
    'segment_log_partition',
    'partition_rows',
    'PARTITION_COLUMNS',
    'renewal_identity_check',
    'select_boundary_convention',
    'SuperadditivityReport',
    'TnStatistic',
    'log_partition_delocalized',
    'superadditivity_check',
    'tn_statistic',
]
