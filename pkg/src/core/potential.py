"""Bond potentials: Gaussian terms with site weights and the annealed potential."""

import logging
import math
from typing import Optional

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from src.config import QuadratureConfig, get_default_quadrature_config
from src.core.base import BondPotential, QuadratureError
from src.core.gaussian import mgf
from src.models.validation import ValidationError, validate_nonnegative, validate_weights


logger = logging.getLogger(__name__)

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
MIN_QUAD_ORDER = 8


def _density_at_order(x: np.ndarray, beta: float, order: int) -> np.ndarray:
    """E[exp(beta w / 2) / sqrt(2 pi) * exp(-exp(beta w) x^2 / 2)] at a fixed order."""
    nodes, weights = hermegauss(order)
    prefactor = weights * INV_SQRT_2PI * np.exp(0.5 * beta * nodes) * INV_SQRT_2PI
    scale = np.exp(beta * nodes)
    x2 = np.square(np.asarray(x, dtype=float))[..., None]
    return np.sum(prefactor * np.exp(-0.5 * scale * x2), axis=-1)


def annealed_density(x, beta: float, quad_order: Optional[int] = None,
                     adaptive: bool = True,
                     config: Optional[QuadratureConfig] = None) -> np.ndarray:
    """Annealed bond kernel exp(-V_beta(x)).

    The order is doubled until two successive orders agree to the configured
    tolerance relative to the peak value M(beta/2)/sqrt(2 pi).

    Args:
        x: Evaluation points
        beta: Disorder strength
        quad_order: Starting Gauss-Hermite order (>= 8)
        adaptive: Double the order until converged; otherwise use it as is
        config: Quadrature configuration

    Returns:
        Kernel values with the shape of x

    Raises:
        QuadratureError: If the order cap is reached before convergence
    """
    config = config or get_default_quadrature_config()
    order = quad_order or config.order
    validate_nonnegative(beta, "beta")
    if order < MIN_QUAD_ORDER:
        raise ValidationError(f"Quadrature order must be at least {MIN_QUAD_ORDER}", "quad_order")

    x = np.asarray(x, dtype=float)
    if beta == 0.0:
        return INV_SQRT_2PI * np.exp(-0.5 * np.square(x))

    current = _density_at_order(x, beta, order)
    if not adaptive:
        return current

    peak = mgf(0.5 * beta) * INV_SQRT_2PI
    while True:
        if 2 * order > config.max_order:
            raise QuadratureError(
                f"Gauss-Hermite average for beta={beta} did not converge "
                f"below relative change {config.tolerance} by order {order}"
            )
        refined = _density_at_order(x, beta, 2 * order)
        change = float(np.max(np.abs(refined - current))) / peak
        logger.debug(f"Quadrature order {order}->{2 * order}: relative change {change:.3e}")
        if change < config.tolerance:
            return refined
        order *= 2
        current = refined


def annealed_potential(x, beta: float, quad_order: int = 64) -> np.ndarray:
    """V_beta(x) = -log of the annealed bond kernel."""
    density = annealed_density(x, beta, quad_order)
    with np.errstate(divide="ignore"):
        return -np.log(density)


class GaussianBondPotential(BondPotential):
    """Kernel exp(-b_m x^2 / 2) / sqrt(2 pi) with site weights b_m."""

    def __init__(self, b: Optional[np.ndarray] = None):
        super().__init__()
        self.b = None if b is None else validate_weights(b)

    @property
    def homogeneous(self) -> bool:
        return self.b is None

    @property
    def max_terms(self) -> Optional[int]:
        return None if self.b is None else self.b.size

    def kernel(self, m: int, x: np.ndarray) -> np.ndarray:
        weight = 1.0 if self.b is None else self.b[m]
        return INV_SQRT_2PI * np.exp(-0.5 * weight * np.square(x))

    def effective_weights(self, n: int) -> np.ndarray:
        if self.b is None:
            return np.ones(n + 1)
        return self.b[: n + 1]

    def describe(self) -> str:
        return "gaussian" if self.b is None else "gaussian_weighted"


class AnnealedBondPotential(BondPotential):
    """Annealed kernel exp(-V_beta(x)); a probability density in x."""

    def __init__(self, beta: float, config: Optional[QuadratureConfig] = None):
        super().__init__()
        validate_nonnegative(beta, "beta")
        self.beta = float(beta)
        self.config = config or get_default_quadrature_config()

    @property
    def homogeneous(self) -> bool:
        return True

    def kernel(self, m: int, x: np.ndarray) -> np.ndarray:
        return annealed_density(x, self.beta, config=self.config)

    def effective_weights(self, n: int) -> np.ndarray:
        # variance of the mixture is E[exp(-beta w)] = exp(beta^2 / 2)
        return np.full(n + 1, math.exp(-0.5 * self.beta ** 2))

    def describe(self) -> str:
        return f"annealed(beta={self.beta})"
