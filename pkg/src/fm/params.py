"""Parameter choice for the iterated fractional-moment bound."""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

from src.fm.base import ParameterError
from src.models.validation import ValidationError, validate_positive


MIN_BLOCK = 3
MAX_TILT_ARGUMENT = 1.0


@dataclass(frozen=True)
class FMParams:
    """Shift delta, block length k, tilt lam and exponent gamma for one (beta, c).

    With L = log(1 + 1/beta): delta = c beta^2 / L^2, k = floor(L^2 / (c beta^2)),
    lam = sqrt(c) beta / L^2 and gamma = 1 - 1/log k.
    """
    beta: float
    c: float
    delta: float
    k: int
    lam: float
    gamma: float

    def __post_init__(self):
        if self.k < MIN_BLOCK:
            raise ParameterError(f"Block length k={self.k} < {MIN_BLOCK}; decrease c or beta", "k")
        if not 0.0 < self.gamma < 1.0:
            raise ParameterError(f"gamma={self.gamma} outside (0, 1)", "gamma")
        if self.sign_margin >= 0:
            raise ParameterError(
                f"delta - beta lam / 2 = {self.sign_margin:.3e} is not negative; need c < 1/4", "c"
            )

    @property
    def sign_margin(self) -> float:
        """delta - beta lam / 2; negative for every admissible parameter set."""
        return self.delta - 0.5 * self.beta * self.lam

    @property
    def tilt_argument(self) -> float:
        """lam gamma / (1 - gamma), the largest mgf argument of the Hölder step."""
        return self.lam * self.gamma / (1.0 - self.gamma)

    @property
    def within_proviso(self) -> bool:
        return abs(self.tilt_argument) <= MAX_TILT_ARGUMENT and self.lam <= MAX_TILT_ARGUMENT

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.update(sign_margin=self.sign_margin, tilt_argument=self.tilt_argument)
        return data


def choose_params(beta: float, c: float) -> FMParams:
    """Evaluate the parameter formulas.

    Args:
        beta: Disorder strength (> 0)
        c: Shift constant (0 < c < 1/4)

    Returns:
        FMParams

    Raises:
        ParameterError: If beta or c is not positive, k < 3 or c >= 1/4
    """
    try:
        validate_positive(beta, "beta")
        validate_positive(c, "c")
    except ValidationError as e:
        raise ParameterError(e.message, e.field)
    scale = math.log1p(1.0 / beta) ** 2
    k = int(math.floor(scale / (c * beta ** 2)))
    if k < MIN_BLOCK:
        raise ParameterError(f"Block length k={k} < {MIN_BLOCK} at beta={beta}, c={c}", "k")
    return FMParams(
        beta=beta,
        c=c,
        delta=c * beta ** 2 / scale,
        k=k,
        lam=math.sqrt(c) * beta / scale,
        gamma=1.0 - 1.0 / math.log(k),
    )
