"""Errors, boundary conventions and weight plumbing for exact partitions."""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.models.params import DisorderVector, ModelParams
from src.models.validation import NumericalError, ValidationError


logger = logging.getLogger(__name__)


class EnumerationLimitError(ValidationError):
    """Exception raised when a size exceeds the enumeration cap."""

    def __init__(self, message: str, field: str = "n",
                 error_code: str = "ENUMERATION_LIMIT"):
        super().__init__(message, field, error_code)


class RenewalIdentityError(NumericalError):
    """Exception raised when no boundary convention satisfies the renewal identity."""

    def __init__(self, message: str, operation: str = "renewal_identity",
                 error_code: str = "RENEWAL_IDENTITY_ERROR"):
        super().__init__(message, operation, error_code)


@dataclass(frozen=True)
class BoundaryConvention:
    """Which contacts next to the boundary zero pairs count as double returns.

    A segment [0, L) has free sites 1..L-2 between the zero pairs (-1, 0)
    and (L-1, L). A contact at site 1 or at site L-2 would form a double zero
    with the adjacent boundary pair.
    """
    exclude_first: bool = True
    exclude_last: bool = True

    def candidates(self, length: int) -> Tuple[int, ...]:
        """Admissible contact sites of a no-double-return segment of the given length."""
        sites = set(range(1, length - 1))
        if self.exclude_first:
            sites.discard(1)
        if self.exclude_last:
            sites.discard(length - 2)
        return tuple(sorted(sites))

    @property
    def label(self) -> str:
        first = "exclude" if self.exclude_first else "include"
        last = "exclude" if self.exclude_last else "include"
        return f"first:{first},last:{last}"


DEFAULT_CONVENTION = BoundaryConvention()

ALL_CONVENTIONS = (
    BoundaryConvention(True, True),
    BoundaryConvention(True, False),
    BoundaryConvention(False, True),
    BoundaryConvention(False, False),
)


def lattice_weights(beta: float, n: int, disorder: Optional[DisorderVector] = None,
                    start: int = 0) -> np.ndarray:
    """Weights b_start..b_{start+n} for a lattice of size n.

    Args:
        beta: Disorder strength
        n: Lattice size
        disorder: Charges; required when beta > 0
        start: Offset of the first Laplacian term

    Returns:
        Array of n+1 positive weights

    Raises:
        ValidationError: If disorder is missing or too short
    """
    if disorder is None:
        if beta > 0:
            raise ValidationError("A disorder realization is required when beta > 0", "disorder")
        return np.ones(n + 1)
    if disorder.n < start + n:
        raise ValidationError(
            f"Disorder of size {disorder.n} cannot serve terms {start}..{start + n}", "disorder"
        )
    return disorder.weights(beta)[start:start + n + 1]


def params_weights(params: ModelParams, disorder: Optional[DisorderVector]) -> np.ndarray:
    """Lattice weights for a parameter set."""
    return lattice_weights(params.beta, params.n, disorder)
