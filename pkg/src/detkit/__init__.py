"""Determinants of the disorder-weighted bilaplacian with pinned sites."""

from .banded import det_banded, ldl_logdet, logdet_banded, logdet_banded_batch
from .base import DeterminantError, as_pins, as_weights
from .closed_form import bracket_sum, det_closed_form, log_bracket_sum, log_det_closed_form
from .dense import det_dense, logdet_dense
from .matrix import bandwidth, build_matrix, full_bands, reduced_bands
from .split import clear_split_cache, det_split
from .structure import StructureReport, structure_check
from .suite import PropertySuiteReport, delocalized_determinant, run_property_suite

__all__ = [
    'det_banded',
    'ldl_logdet',
    'logdet_banded',
    'logdet_banded_batch',
    'DeterminantError',
    'as_pins',
    'as_weights',
    'bracket_sum',
    'det_closed_form',
    'log_bracket_sum',
    'log_det_closed_form',
    'det_dense',
    'logdet_dense',
    'bandwidth',
    'build_matrix',
    'full_bands',
    'reduced_bands',
    'clear_split_cache',
    'det_split',
    'StructureReport',
    'structure_check',
    'PropertySuiteReport',
    'delocalized_determinant',
    'run_property_suite',
]
