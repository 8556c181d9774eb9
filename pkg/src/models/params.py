"""Parameter and disorder data models."""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.models.validation import (
    ValidationError,
    validate_nonnegative,
    validate_seed,
    validate_size,
    validate_weights,
)


@dataclass(frozen=True)
class ModelParams:
    """Disorder strength, pinning reward and system size.

    The lattice of size n carries Laplacian terms m = 0..n and free sites
    1..n-1 with boundary values phi_{-1} = phi_0 = phi_n = phi_{n+1} = 0.
    """
    beta: float
    eps: float
    n: int

    def __post_init__(self):
        validate_nonnegative(self.beta, "beta")
        validate_nonnegative(self.eps, "eps")
        validate_size(self.n, 1)


@dataclass(frozen=True)
class DisorderVector:
    """One realization of the charges omega_0..omega_n."""
    omega: np.ndarray
    seed: int
    mean_shift: float = 0.0
    stream: int = 0

    def __post_init__(self):
        validate_seed(self.seed)
        arr = np.asarray(self.omega, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValidationError("Disorder needs at least two charges", "omega")
        object.__setattr__(self, "omega", arr)

    @property
    def n(self) -> int:
        """Lattice size served by this realization."""
        return self.omega.size - 1

    def weights(self, beta: float) -> np.ndarray:
        """Bond weights b_i = exp(beta * omega_i)."""
        return np.exp(beta * self.omega)


@dataclass(frozen=True)
class WeightSeq:
    """Positive weights b_0..b_n of the bilaplacian quadratic form."""
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "b", validate_weights(self.b))

    @property
    def n(self) -> int:
        return self.b.size - 1


@dataclass(frozen=True)
class PinnedPattern:
    """Interior sites held at zero; their rows and columns are deleted."""
    pins: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if any(int(p) < 1 for p in self.pins):
            raise ValidationError("Pinned sites must be interior (>= 1)", "pins")
        object.__setattr__(self, "pins", tuple(sorted(set(int(p) for p in self.pins))))

    @property
    def r(self) -> int:
        return len(self.pins)

