"""Fractional-moment certificates for the quenched/annealed critical-point gap."""

from .base import ParameterError
from .certify import (
    VERDICT_CERTIFIED,
    VERDICT_INCONCLUSIVE,
    VERDICT_REJECTED,
    GapCertificate,
    RecursionReport,
    RhoEstimate,
    certify_gap,
    certify_sweep,
    moment_table,
    recursion_check,
    rho_estimate,
)
from .moments import (
    CBetaFit,
    HolderReport,
    MomentEstimate,
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
from .params import FMParams, choose_params

__all__ = [
    'ParameterError',
    'VERDICT_CERTIFIED',
    'VERDICT_INCONCLUSIVE',
    'VERDICT_REJECTED',
    'GapCertificate',
    'RecursionReport',
    'RhoEstimate',
    'certify_gap',
    'certify_sweep',
    'moment_table',
    'recursion_check',
    'rho_estimate',
    'CBetaFit',
    'HolderReport',
    'MomentEstimate',
    'annealed_moment',
    'annealed_zcheck',
    'fit_c_beta',
    'fractional_moment',
    'gaussian_c_m',
    'holder_bound_check',
    'holder_prefactor',
    'log_moment_bounds',
    'moment_bound',
    'subadditive_bound',
    'tilt_weight_mean',
    'tilted_expectation',
    'FMParams',
    'choose_params',
]
