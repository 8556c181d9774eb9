"""Result records shared by the solvers."""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from src.models.validation import ValidationError


# Provenance tags
METHOD_ENUMERATION = "enumeration"
METHOD_RENEWAL = "renewal_root"
METHOD_TRANSFER = "transfer_grid"
METHOD_MONTE_CARLO = "monte_carlo"
METHOD_CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class PartitionValue:
    """A partition function stored in the log domain.

    log_value is -inf only for the vanishing seed of the no-double-return
    sequence at length two.
    """
    log_value: float
    n: int
    beta: float
    eps: float
    seed: Optional[int] = None
    method: str = METHOD_ENUMERATION

    def __post_init__(self):
        if math.isnan(self.log_value) or self.log_value == math.inf:
            raise ValidationError(
                f"Partition log value must be finite or -inf, got {self.log_value}",
                "log_value"
            )

    @property
    def value(self) -> float:
        return math.exp(self.log_value)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FreeEnergyEstimate:
    """A free-energy value with its statistical error and provenance."""
    value: float
    stderr: float = 0.0
    method: str = METHOD_RENEWAL
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.stderr < 0 or math.isnan(self.stderr):
            raise ValidationError(f"stderr must be nonnegative, got {self.stderr}", "stderr")

    def exceeds(self, floor: float, sigma: float = 3.0) -> bool:
        """True if the value clears max(sigma * stderr, floor)."""
        return self.value > max(sigma * self.stderr, floor)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class CriticalPointEstimate:
    """A critical reward with a bracketing interval."""
    value: float
    lower: float
    upper: float
    method: str = METHOD_RENEWAL

    def __post_init__(self):
        if not (self.lower <= self.value <= self.upper):
            raise ValidationError(
                f"Estimate {self.value} outside its bracket [{self.lower}, {self.upper}]",
                "value"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
