"""Polynomial structure of the pinned determinant in the weights.

The determinant of the pinned matrix is a homogeneous polynomial in
b_0..b_n of degree n-1-r in which every variable appears at most linearly.
Both properties are checked numerically: the degree from Euler scaling and
multilinearity from vanishing second central differences.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

import numpy as np

from src.detkit.banded import logdet_banded_batch
from src.detkit.base import PatternLike, WeightsLike, as_pins, as_weights


logger = logging.getLogger(__name__)

SCALING_FACTORS = (2.0, 3.0)
DEFAULT_STEP = 1e-3
DEFAULT_TOLERANCE = 1e-8


@dataclass
class StructureReport:
    """Outcome of the degree and multilinearity checks."""
    n: int
    pins: tuple
    expected_degree: int
    degree: int
    degree_estimates: List[float] = field(default_factory=list)
    max_curvature: float = 0.0
    multilinear: bool = True

    @property
    def degree_ok(self) -> bool:
        return self.degree == self.expected_degree

    @property
    def passed(self) -> bool:
        return self.degree_ok and self.multilinear

    def to_dict(self) -> Dict[str, Any]:
        result = asdict(self)
        result["degree_ok"] = self.degree_ok
        result["passed"] = self.passed
        return result


def structure_check(b: WeightsLike, pattern: PatternLike = None,
                    step: float = DEFAULT_STEP,
                    tolerance: float = DEFAULT_TOLERANCE) -> StructureReport:
    """Check homogeneity degree and multilinearity of the pinned determinant.

    All perturbed weight sequences are factorized in one batched pass.

    Args:
        b: Weights b_0..b_n
        pattern: Pinned interior sites
        step: Relative perturbation of each weight for the second differences
        tolerance: Bound on |scaling exponent - integer| and on the relative
            second difference

    Returns:
        StructureReport with the measured degree and curvature
    """
    b = as_weights(b)
    n = b.size - 1
    pins = as_pins(pattern, n)
    mask = np.zeros(max(n - 1, 0), dtype=bool)
    for site in pins:
        mask[site - 1] = True

    rows = [b] + [factor * b for factor in SCALING_FACTORS]
    for i in range(n + 1):
        for sign in (1.0, -1.0):
            bumped = b.copy()
            bumped[i] *= 1.0 + sign * step
            rows.append(bumped)
    logdets = logdet_banded_batch(np.vstack(rows), mask)

    base = logdets[0]
    estimates = [float((logdets[1 + j] - base) / math.log(factor))
                 for j, factor in enumerate(SCALING_FACTORS)]
    degree = int(round(estimates[0]))
    if any(abs(est - degree) > tolerance for est in estimates):
        degree = -1

    bumps = np.exp(logdets[1 + len(SCALING_FACTORS):] - base).reshape(n + 1, 2)
    curvature = np.abs(bumps[:, 0] - 2.0 + bumps[:, 1])
    max_curvature = float(np.max(curvature)) if curvature.size else 0.0

    report = StructureReport(
        n=n,
        pins=pins,
        expected_degree=n - 1 - len(pins),
        degree=degree,
        degree_estimates=estimates,
        max_curvature=max_curvature,
        multilinear=max_curvature <= tolerance,
    )
    logger.debug(f"Structure check n={n} r={len(pins)}: degree {degree}, "
                 f"curvature {max_curvature:.2e}")
    return report
