"""Renewal solvers for the homogeneous and annealed free energy."""

from .base import BracketingError, FitError, KernelError, PinningKernel, RenewalError, ZCheckProvider
from .kernels import (
    ExponentFit,
    GeometricKernel,
    LogCorrectedRatio,
    PowerLawKernel,
    TabulatedKernel,
    TelescopingKernel,
    exponent_fit,
    log_corrected_ratio,
    pinning_curve,
    pinning_free_energy,
)
from .solver import (
    AsymptoteReport,
    RenewalTheoremReport,
    asymptote_constant,
    critical_point,
    free_energy_curve,
    generating_root,
    renewal_series,
    renewal_theorem_check,
    solve_free_energy,
)
from .table import EnumerationZCheck, RenewalTable, build_table, fit_tail, tail_window

__all__ = [
    'BracketingError',
    'FitError',
    'KernelError',
    'PinningKernel',
    'RenewalError',
    'ZCheckProvider',
    'ExponentFit',
    'GeometricKernel',
    'LogCorrectedRatio',
    'PowerLawKernel',
    'TabulatedKernel',
    'TelescopingKernel',
    'exponent_fit',
    'log_corrected_ratio',
    'pinning_curve',
    'pinning_free_energy',
    'AsymptoteReport',
    'RenewalTheoremReport',
    'asymptote_constant',
    'critical_point',
    'free_energy_curve',
    'generating_root',
    'renewal_series',
    'renewal_theorem_check',
    'solve_free_energy',
    'EnumerationZCheck',
    'RenewalTable',
    'build_table',
    'fit_tail',
    'tail_window',
]
