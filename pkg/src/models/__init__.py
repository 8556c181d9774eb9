"""Domain types shared by every module."""

from .params import DisorderVector, ModelParams, PinnedPattern, WeightSeq
from .results import (
    METHOD_CLOSED_FORM,
    METHOD_ENUMERATION,
    METHOD_MONTE_CARLO,
    METHOD_RENEWAL,
    METHOD_TRANSFER,
    CriticalPointEstimate,
    FreeEnergyEstimate,
    PartitionValue,
)
from .validation import NumericalError, ValidationError

__all__ = [
    'DisorderVector',
    'ModelParams',
    'PinnedPattern',
    'WeightSeq',
    'CriticalPointEstimate',
    'FreeEnergyEstimate',
    'PartitionValue',
    'METHOD_CLOSED_FORM',
    'METHOD_ENUMERATION',
    'METHOD_MONTE_CARLO',
    'METHOD_RENEWAL',
    'METHOD_TRANSFER',
    'NumericalError',
    'ValidationError',
]
