"""Uniform grids carrying the continuous part of the pinning measure."""

from dataclasses import dataclass

import numpy as np

from src.models.validation import ValidationError, validate_positive


MIN_GRID_SIZE = 64


@dataclass(frozen=True)
class TransferGrid:
    """Points x_i = (i - c) h on [-R, R) with c = size // 2, so x_c = 0.

    The atom of weight eps at zero is not part of the grid; the transfer
    operator appends it as an extra state sharing the coordinate of x_c.
    """
    size: int
    radius: float

    def __post_init__(self):
        if int(self.size) != self.size or self.size < MIN_GRID_SIZE:
            raise ValidationError(f"Grid size must be an integer >= {MIN_GRID_SIZE}, got {self.size}",
                                  "grid_size")
        validate_positive(self.radius, "radius")

    @property
    def center(self) -> int:
        return self.size // 2

    @property
    def spacing(self) -> float:
        return self.radius / self.center

    @property
    def coordinates(self) -> np.ndarray:
        return (np.arange(self.size) - self.center) * self.spacing

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weights."""
        w = np.full(self.size, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def outer_mask(self, band: float) -> np.ndarray:
        """Points with |x| > (1 - band) R."""
        if not 0.0 <= band < 1.0:
            raise ValidationError(f"Audit band must lie in [0, 1), got {band}", "audit_band")
        return np.abs(self.coordinates) > (1.0 - band) * self.radius

    def refined(self) -> "TransferGrid":
        """Same radius with twice the points."""
        return TransferGrid(size=2 * self.size, radius=self.radius)
