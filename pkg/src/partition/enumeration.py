"""Exact partition functions by contact-set enumeration.

A lattice of size n expands as

    Z_n = sum_S eps^|S| (2 pi)^{-(|S|+1)/2} det(B_{-S})^{-1/2}

over contact sets S of the free sites 1..n-1. Contact sets are visited in
Gray-code order in fixed blocks; each block is factorized in one batched
pass and reduced to log sums per contact count. Blocks are folded in index
order, so results do not depend on the number of worker threads.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional

import numpy as np
from scipy.special import logsumexp

from src.config import LOG_SQRT_2PI, EnumerationConfig, get_default_enumeration_config
from src.detkit.banded import logdet_banded_batch
from src.models.params import DisorderVector, ModelParams
from src.models.results import METHOD_ENUMERATION, PartitionValue
from src.models.validation import validate_nonnegative, validate_pins, validate_size, validate_weights
from src.partition.base import (
    DEFAULT_CONVENTION,
    BoundaryConvention,
    EnumerationLimitError,
    lattice_weights,
    params_weights,
)


logger = logging.getLogger(__name__)

LOG_2PI = 2.0 * LOG_SQRT_2PI


def gray_code_masks(k: int, start: int, stop: int) -> np.ndarray:
    """Contact masks for Gray-code indices start..stop-1.

    Consecutive rows differ in exactly one position.

    Args:
        k: Number of candidate sites
        start: First index
        stop: One past the last index

    Returns:
        Boolean array (stop - start, k)
    """
    j = np.arange(start, stop, dtype=np.int64)
    gray = j ^ (j >> 1)
    return ((gray[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(bool)


def _block_log_sums(b: np.ndarray, columns: np.ndarray, start: int, stop: int,
                    independent: bool, power: float, width: int) -> np.ndarray:
    masks = gray_code_masks(columns.size, start, stop)
    pinned = np.zeros((masks.shape[0], max(b.size - 2, 0)), dtype=bool)
    if columns.size:
        pinned[:, columns] = masks
    if independent and pinned.shape[1] > 1:
        keep = ~np.any(pinned[:, :-1] & pinned[:, 1:], axis=1)
        pinned = pinned[keep]
        masks = masks[keep]

    out = np.full(width, -np.inf)
    if masks.shape[0] == 0:
        return out
    counts = masks.sum(axis=1)
    terms = -0.5 * power * logdet_banded_batch(b, pinned)
    for count in np.unique(counts):
        out[count] = logsumexp(terms[counts == count])
    return out


def contact_log_coefficients(b, candidates: Optional[Iterable[int]] = None,
                             independent: bool = False, power: float = 1.0,
                             config: Optional[EnumerationConfig] = None) -> np.ndarray:
    """Log sums of det(B_{-S})^{-power/2} grouped by contact count |S|.

    Args:
        b: Weights b_0..b_n
        candidates: Sites allowed to carry a contact; all of 1..n-1 by default
        independent: Skip contact sets with two adjacent sites
        power: Exponent applied to det^{-1/2}
        config: Enumeration configuration

    Returns:
        Array of length k+1 (k candidates); entry l is -inf when no set of
        size l is admissible

    Raises:
        EnumerationLimitError: If n exceeds the configured cap
    """
    config = config or get_default_enumeration_config()
    b = validate_weights(b)
    n = b.size - 1
    if n > config.max_size:
        raise EnumerationLimitError(
            f"Enumeration over size {n} exceeds the cap of {config.max_size}"
        )
    sites = range(1, n) if candidates is None else candidates
    columns = np.asarray(validate_pins(sites, n), dtype=int) - 1
    total = 1 << columns.size
    width = columns.size + 1
    blocks = [(start, min(start + config.block_size, total))
              for start in range(0, total, config.block_size)]

    started = time.time()
    if total > config.block_size:
        logger.info(f"Starting enumeration of 2^{columns.size} contact sets "
                    f"in {len(blocks)} blocks on {config.threads} threads")

    def run(block):
        return _block_log_sums(b, columns, block[0], block[1], independent, power, width)

    result = np.full(width, -np.inf)
    if config.threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as executor:
            for partial in executor.map(run, blocks):
                result = np.logaddexp(result, partial)
    else:
        for block in blocks:
            result = np.logaddexp(result, run(block))

    if total > config.block_size:
        logger.info(f"Completed enumeration of size {n} in {time.time() - started:.2f}s")
    return result


def log_polynomial(coefficients: np.ndarray, eps: float, power: float = 1.0) -> float:
    """log sum_l exp(coefficients[l]) eps^(power l)."""
    validate_nonnegative(eps, "eps")
    coefficients = np.asarray(coefficients, dtype=float)
    if eps == 0.0:
        return float(coefficients[0])
    terms = coefficients + power * math.log(eps) * np.arange(coefficients.size)
    if np.all(np.isneginf(terms)):
        return -math.inf
    return float(logsumexp(terms))


def lattice_log_coefficients(b, candidates: Optional[Iterable[int]] = None,
                             independent: bool = False, power: float = 1.0,
                             config: Optional[EnumerationConfig] = None) -> np.ndarray:
    """Coefficients of the lattice partition as a polynomial in eps, in log form.

    Entry l is log[(2 pi)^{-power (l+1)/2} sum_{|S|=l} det(B_{-S})^{-power/2}].
    """
    coefficients = contact_log_coefficients(b, candidates, independent, power, config)
    contacts = np.arange(coefficients.size)
    return coefficients - 0.5 * power * (contacts + 1) * LOG_2PI


def segment_log_coefficients(weights, no_double_return: bool = False,
                             convention: BoundaryConvention = DEFAULT_CONVENTION,
                             config: Optional[EnumerationConfig] = None) -> np.ndarray:
    """Log coefficients in eps of Z_{0,L} or of the no-double-return Z_{0,L}.

    The segment [0, L) carries L Laplacian terms with weights b_0..b_{L-1}
    and free sites 1..L-2, so Z_{0,L} is the lattice partition of size L-1
    divided by sqrt(2 pi).

    Args:
        weights: Weights b_0..b_{L-1}
        no_double_return: Restrict to contact sets without a double zero
        convention: Boundary convention for the restricted sets
        config: Enumeration configuration

    Returns:
        Coefficient array in the log domain
    """
    weights = validate_weights(weights)
    length = weights.size
    if length == 1:
        return np.array([-LOG_SQRT_2PI])
    if no_double_return and length == 2:
        return np.array([-np.inf])
    candidates = convention.candidates(length) if no_double_return else None
    lattice = lattice_log_coefficients(weights, candidates, independent=no_double_return,
                                       config=config)
    return lattice - LOG_SQRT_2PI


def segment_log_partition(eps: float, weights, no_double_return: bool = False,
                          convention: BoundaryConvention = DEFAULT_CONVENTION,
                          config: Optional[EnumerationConfig] = None) -> float:
    """log Z_{0,L} (or its no-double-return restriction) for the given weights."""
    coefficients = segment_log_coefficients(weights, no_double_return, convention, config)
    return log_polynomial(coefficients, eps)


def partition_enumerate(params: ModelParams, disorder: Optional[DisorderVector] = None,
                        config: Optional[EnumerationConfig] = None) -> PartitionValue:
    """Exact Z_n by enumeration of all contact sets.

    Args:
        params: beta, eps and the lattice size n
        disorder: Charges omega_0..omega_n; required when beta > 0
        config: Enumeration configuration

    Returns:
        PartitionValue holding log Z_n

    Raises:
        EnumerationLimitError: If n exceeds the configured cap
    """
    b = params_weights(params, disorder)
    coefficients = lattice_log_coefficients(b, config=config)
    return PartitionValue(
        log_value=log_polynomial(coefficients, params.eps),
        n=params.n,
        beta=params.beta,
        eps=params.eps,
        seed=None if disorder is None else disorder.seed,
        method=METHOD_ENUMERATION,
    )


def partition_no_double_return(eps: float, n: int, disorder: Optional[DisorderVector] = None,
                               beta: float = 0.0,
                               convention: BoundaryConvention = DEFAULT_CONVENTION,
                               config: Optional[EnumerationConfig] = None) -> PartitionValue:
    """No-double-return segment partition for [0, n).

    Ž_{0,1} = 1/sqrt(2 pi) and Ž_{0,2} = 0; for n >= 3 the contacts avoid
    adjacent pairs and the sites next to the boundary zero pairs.

    Args:
        eps: Pinning reward
        n: Segment length
        disorder: Charges for the random case
        beta: Disorder strength
        convention: Boundary convention
        config: Enumeration configuration

    Returns:
        PartitionValue with log_value -inf for n = 2
    """
    validate_size(n, 1)
    weights = lattice_weights(beta, n - 1, disorder)
    return PartitionValue(
        log_value=segment_log_partition(eps, weights, True, convention, config),
        n=n,
        beta=beta,
        eps=eps,
        seed=None if disorder is None else disorder.seed,
        method=METHOD_ENUMERATION,
    )


def adjusted_partition(params: ModelParams, disorder: Optional[DisorderVector] = None,
                       config: Optional[EnumerationConfig] = None) -> PartitionValue:
    """Adjusted partition exp(beta/2 sum_i omega_i) Z_n over i = 0..n."""
    value = partition_enumerate(params, disorder, config)
    shift = 0.0
    if disorder is not None:
        shift = 0.5 * params.beta * float(np.sum(disorder.omega[: params.n + 1]))
    return PartitionValue(
        log_value=value.log_value + shift,
        n=params.n,
        beta=params.beta,
        eps=params.eps,
        seed=value.seed,
        method=METHOD_ENUMERATION,
    )
