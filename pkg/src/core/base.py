"""Base classes and errors for the model conventions."""

from abc import ABC, abstractmethod
from typing import Optional
import logging

import numpy as np

from src.models.validation import NumericalError


logger = logging.getLogger(__name__)


class OutOfRangeError(NumericalError):
    """Exception raised when a closed-form value leaves the float range."""

    def __init__(self, message: str, operation: str = "mgf",
                 error_code: str = "OUT_OF_RANGE"):
        super().__init__(message, operation, error_code)


class QuadratureError(NumericalError):
    """Exception raised when Gauss-Hermite averaging does not converge."""

    def __init__(self, message: str, operation: str = "annealed_density",
                 error_code: str = "QUADRATURE_ERROR"):
        super().__init__(message, operation, error_code)


class BondPotential(ABC):
    """Weight attached to one Laplacian term as a function of its value.

    The kernel of term m evaluated at x is exp(-U_m(x)) including the
    per-term normalisation, so that a segment of L terms is the plain
    product of L kernels integrated over its free sites.
    """

    def __init__(self):
        """Initialize the potential."""
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def homogeneous(self) -> bool:
        """True if every term carries the same kernel."""
        pass

    @abstractmethod
    def kernel(self, m: int, x: np.ndarray) -> np.ndarray:
        """Evaluate the kernel of term m.

        Args:
            m: Term index (ignored by homogeneous potentials)
            x: Values of the discrete Laplacian

        Returns:
            Kernel values, same shape as x
        """
        pass

    @abstractmethod
    def effective_weights(self, n: int) -> np.ndarray:
        """Gaussian weights b_0..b_n with matching second moments.

        Used only to size transfer grids.
        """
        pass

    @property
    def max_terms(self) -> Optional[int]:
        """Number of terms available, None if unbounded."""
        return None

    def kernel_at_zero(self, m: int = 0) -> float:
        """Kernel value of a term whose three sites all sit at zero."""
        return float(self.kernel(m, np.zeros(1))[0])

    def describe(self) -> str:
        """Short tag used in logs and artifacts."""
        return self.__class__.__name__
