"""Tables of no-double-return partitions with a fitted n^{-2} tail."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.config import EnumerationConfig, RenewalConfig, get_default_renewal_config
from src.models.validation import ValidationError, validate_positive, validate_size
from src.partition.base import DEFAULT_CONVENTION, BoundaryConvention
from src.partition.enumeration import log_polynomial, segment_log_coefficients
from src.renewal.base import FitError, ZCheckProvider


logger = logging.getLogger(__name__)

MIN_TABLE_SIZE = 5


@dataclass
class RenewalTable:
    """Ž_{0,1..n_max} as polynomials in eps, optionally evaluated at one eps.

    Entry n-1 of coefficients holds the log coefficients of Ž_{0,n}; the
    entry for n = 2 is [-inf]. Evaluating at eps fits the tail constant C of
    n^2 eps^2 Ž_{0,n} ~ C over the top part of the table.
    """
    coefficients: List[np.ndarray]
    source: str = "enumeration"
    eps: Optional[float] = None
    tail_constant: Optional[float] = None
    tail_stderr: float = 0.0
    tail_fraction: float = 1.0 / 3.0

    def __post_init__(self):
        self.coefficients = [np.asarray(c, dtype=float) for c in self.coefficients]
        if any(np.any(np.isnan(c)) for c in self.coefficients):
            raise ValidationError("Table coefficients must not be NaN", "coefficients")
        if self.tail_constant is not None and self.tail_constant <= 0:
            raise ValidationError("Fitted tail constant must be positive", "tail_constant")

    @property
    def n_max(self) -> int:
        return len(self.coefficients)

    @property
    def fitted(self) -> bool:
        return self.eps is not None and self.tail_constant is not None

    def log_zcheck(self, eps: Optional[float] = None) -> np.ndarray:
        """log Ž_{0,n} for n = 1..n_max at eps (defaults to the table's eps)."""
        eps = self.eps if eps is None else eps
        if eps is None:
            raise ValidationError("No eps given and the table is not evaluated", "eps")
        return np.array([log_polynomial(c, eps) for c in self.coefficients])

    def zcheck(self, eps: Optional[float] = None) -> np.ndarray:
        """Ž_{0,n} for n = 1..n_max."""
        return np.exp(self.log_zcheck(eps))

    def at(self, eps: float, fraction: Optional[float] = None) -> "RenewalTable":
        """The same table evaluated at eps, with the tail refitted."""
        validate_positive(eps, "eps")
        fraction = self.tail_fraction if fraction is None else fraction
        constant, stderr = fit_tail(self, eps, fraction)
        return replace(self, eps=eps, tail_constant=constant, tail_stderr=stderr,
                       tail_fraction=fraction)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "n_max": self.n_max,
            "eps": self.eps,
            "tail_constant": self.tail_constant,
            "tail_stderr": self.tail_stderr,
            "log_zcheck": None if self.eps is None else [float(v) for v in self.log_zcheck()],
        }


def tail_window(n_max: int, fraction: float) -> np.ndarray:
    """Segment lengths n used for the tail fit: the top part of 3..n_max."""
    sizes = np.arange(3, n_max + 1)
    count = max(2, int(math.ceil(sizes.size * fraction)))
    return sizes[-count:]


def fit_tail(table: RenewalTable, eps: Optional[float] = None,
             fraction: Optional[float] = None) -> Tuple[float, float]:
    """Least-squares constant C for n^2 eps^2 Ž_{0,n} over the top of the table.

    Args:
        table: Renewal table
        eps: Reward (defaults to the table's eps)
        fraction: Share of the computed n entering the fit

    Returns:
        (C, standard error of C)

    Raises:
        FitError: If the table is too short or the values are not positive
    """
    if table.n_max < MIN_TABLE_SIZE:
        raise FitError(f"Tail fit needs n_max >= {MIN_TABLE_SIZE}, got {table.n_max}")
    eps = table.eps if eps is None else eps
    fraction = table.tail_fraction if fraction is None else fraction
    sizes = tail_window(table.n_max, fraction)
    zcheck = table.zcheck(eps)
    values = sizes.astype(float) ** 2 * eps ** 2 * zcheck[sizes - 1]
    if not np.all(values > 0):
        raise FitError(f"Non-positive entries in the tail window at eps={eps}")
    constant = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(values.size))
    logger.debug(f"Tail fit at eps={eps}: C={constant:.6e} +- {stderr:.2e} over n={sizes.tolist()}")
    return constant, stderr


class EnumerationZCheck(ZCheckProvider):
    """Exact Ž_{0,n} of the non-random Gaussian model by contact enumeration."""

    def __init__(self, convention: BoundaryConvention = DEFAULT_CONVENTION,
                 config: Optional[EnumerationConfig] = None):
        super().__init__()
        self.convention = convention
        self.config = config

    @property
    def label(self) -> str:
        return "enumeration"

    def log_coefficients(self, n: int) -> np.ndarray:
        validate_size(n, 1)
        return segment_log_coefficients(np.ones(n), True, self.convention, self.config)


def build_table(provider: ZCheckProvider, n_max: Optional[int] = None,
                eps: Optional[float] = None,
                config: Optional[RenewalConfig] = None) -> RenewalTable:
    """Tabulate Ž_{0,1..n_max} from a provider.

    Args:
        provider: Source of the coefficients
        n_max: Truncation (defaults to the renewal configuration)
        eps: If given, evaluate the table and fit the tail
        config: Renewal configuration

    Returns:
        RenewalTable
    """
    config = config or get_default_renewal_config()
    n_max = n_max or config.n_max
    validate_size(n_max, MIN_TABLE_SIZE, "n_max")
    provider.logger.info(f"Building {provider.label} table up to n={n_max}")
    table = RenewalTable(
        coefficients=provider.all_log_coefficients(n_max),
        source=provider.label,
        tail_fraction=config.tail_fraction,
    )
    return table if eps is None else table.at(eps)
