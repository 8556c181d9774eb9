"""Renewal decomposition of the segment partition at its first double zero.

Splitting a path of [0, n) at its first double zero (chi-1, chi) gives

    Z_{0,n} = Ž_{0,n} + eps Ž_{0,1} Z_{1,n}
              + sum_{chi=2}^{n-2} eps^2 Ž_{0,chi} Z_{chi,n}
              + eps Ž_{0,n-1} Z_{n-1,n}

for n >= 3. Both sides are evaluated by enumeration.
"""

import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from src.config import LOG_SQRT_2PI, EnumerationConfig
from src.models.params import DisorderVector
from src.models.validation import validate_nonnegative, validate_size
from src.partition.base import (
    ALL_CONVENTIONS,
    DEFAULT_CONVENTION,
    BoundaryConvention,
    EnumerationLimitError,
    RenewalIdentityError,
    lattice_weights,
)
from src.partition.enumeration import segment_log_partition


logger = logging.getLogger(__name__)

MAX_IDENTITY_SIZE = 20
DEFAULT_IDENTITY_EPS = (0.1, 0.5, 1.0, 2.0)
IDENTITY_TOLERANCE = 1e-12


def renewal_identity_terms(eps: float, weights: np.ndarray,
                           convention: BoundaryConvention = DEFAULT_CONVENTION,
                           config: Optional[EnumerationConfig] = None) -> np.ndarray:
    """Log values of the right-hand side terms of the renewal identity.

    Args:
        eps: Pinning reward (> 0)
        weights: Weights b_0..b_{n-1} of the segment [0, n), n >= 3
        convention: Boundary convention for the no-double-return factors
        config: Enumeration configuration

    Returns:
        Array of log terms, first the no-contact-pair term then one per split
    """
    n = weights.size
    log_eps = math.log(eps)

    def hat(chi: int) -> float:
        return segment_log_partition(eps, weights[:chi], True, convention, config)

    def full(chi: int) -> float:
        return segment_log_partition(eps, weights[chi:], False, convention, config)

    terms = [hat(n), log_eps + hat(1) + full(1)]
    for chi in range(2, n - 1):
        terms.append(2.0 * log_eps + hat(chi) + full(chi))
    terms.append(log_eps + hat(n - 1) + full(n - 1))
    return np.array(terms)


def renewal_identity_check(eps: float, n: int, disorder: Optional[DisorderVector] = None,
                           beta: float = 0.0,
                           convention: BoundaryConvention = DEFAULT_CONVENTION,
                           config: Optional[EnumerationConfig] = None) -> float:
    """Relative residual of the renewal identity on [0, n).

    At n = 2 the decomposition degenerates; the residual then compares
    Z_{0,2} with its seed value 1/(2 pi). At eps = 0 no contacts are allowed
    and the identity reads Z_{0,n} = Ž_{0,n}.

    Args:
        eps: Pinning reward
        n: Segment length, 2 <= n <= 20
        disorder: Charges for the random case
        beta: Disorder strength
        convention: Boundary convention under test
        config: Enumeration configuration

    Returns:
        |rhs - lhs| / lhs

    Raises:
        ValidationError: If n lies outside 2..20
    """
    validate_nonnegative(eps, "eps")
    validate_size(n, 2)
    if n > MAX_IDENTITY_SIZE:
        raise EnumerationLimitError(f"Renewal identity check is limited to n <= {MAX_IDENTITY_SIZE}")

    weights = lattice_weights(beta, n - 1, disorder)
    lhs = segment_log_partition(eps, weights, False, convention, config)
    if n == 2:
        rhs = -2.0 * LOG_SQRT_2PI
    elif eps == 0.0:
        rhs = segment_log_partition(eps, weights, True, convention, config)
    else:
        rhs = float(logsumexp(renewal_identity_terms(eps, weights, convention, config)))
    residual = abs(math.expm1(rhs - lhs))
    logger.debug(f"Renewal identity n={n} eps={eps} [{convention.label}]: residual {residual:.3e}")
    return residual


def select_boundary_convention(eps_values: Iterable[float] = DEFAULT_IDENTITY_EPS,
                               n_max: int = 10,
                               tolerance: float = IDENTITY_TOLERANCE,
                               candidates: Sequence[BoundaryConvention] = ALL_CONVENTIONS,
                               config: Optional[EnumerationConfig] = None) -> BoundaryConvention:
    """The unique boundary convention satisfying the renewal identity.

    Args:
        eps_values: Rewards at which the identity is evaluated
        n_max: Largest segment length checked
        tolerance: Residual bound
        candidates: Conventions under consideration
        config: Enumeration configuration

    Returns:
        The passing convention

    Raises:
        RenewalIdentityError: If none or several conventions pass
    """
    eps_values = tuple(eps_values)
    passing = []
    for convention in candidates:
        worst = max(
            renewal_identity_check(eps, n, convention=convention, config=config)
            for eps in eps_values for n in range(2, n_max + 1)
        )
        logger.info(f"Convention {convention.label}: worst residual {worst:.3e}")
        if worst <= tolerance:
            passing.append(convention)
    if len(passing) != 1:
        labels = [c.label for c in passing]
        logger.error(f"Boundary convention selection found {len(passing)} passing: {labels}")
        raise RenewalIdentityError(
            f"Expected exactly one passing boundary convention, found {len(passing)}: {labels}"
        )
    return passing[0]
