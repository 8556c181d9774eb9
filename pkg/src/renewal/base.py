"""Abstract interfaces and errors for renewal solvers."""

from abc import ABC, abstractmethod
import logging
from typing import Optional

import numpy as np

from src.models.validation import NumericalError, ValidationError


class RenewalError(NumericalError):
    """Exception raised when a renewal series cannot be evaluated reliably."""

    def __init__(self, message: str, operation: str = "renewal",
                 error_code: str = "RENEWAL_ERROR"):
        super().__init__(message, operation, error_code)


class BracketingError(RenewalError):
    """Exception raised when a root cannot be bracketed."""

    def __init__(self, message: str, operation: str = "bracket",
                 error_code: str = "BRACKETING_ERROR"):
        super().__init__(message, operation, error_code)


class KernelError(ValidationError):
    """Exception raised for an invalid or divergent pinning kernel."""

    def __init__(self, message: str, field: str = "kernel",
                 error_code: str = "KERNEL_ERROR"):
        super().__init__(message, field, error_code)


class FitError(NumericalError):
    """Exception raised when a regression grid is degenerate."""

    def __init__(self, message: str, operation: str = "fit",
                 error_code: str = "FIT_ERROR"):
        super().__init__(message, operation, error_code)


class ZCheckProvider(ABC):
    """Source of no-double-return segment partitions as polynomials in eps.

    log_coefficients(n)[l] is the log of the coefficient of eps^l in Ž_{0,n}.
    """

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def log_coefficients(self, n: int) -> np.ndarray:
        """Log coefficients of Ž_{0,n}.

        Args:
            n: Segment length (>= 1)

        Returns:
            Coefficient array; [-inf] for n = 2
        """
        pass

    def all_log_coefficients(self, n_max: int) -> list:
        """Coefficients for n = 1..n_max; providers with a single sweep override this."""
        return [self.log_coefficients(n) for n in range(1, n_max + 1)]

    @property
    @abstractmethod
    def label(self) -> str:
        """Short provenance tag."""
        pass


class PinningKernel(ABC):
    """Inter-arrival law K(n), n >= 1, of a discrete renewal with sum K <= 1.

    deficit(f) = sum_n K(n) (1 - exp(-f n)) drives the homogeneous identity
    e^h sum_n K(n) e^{-f n} = 1.
    """

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    @abstractmethod
    def total_mass(self) -> float:
        """sum_n K(n)."""
        pass

    @abstractmethod
    def deficit(self, f: float) -> float:
        """sum_n K(n) (1 - exp(-f n)) for f > 0."""
        pass

    @abstractmethod
    def probabilities(self, n_max: int) -> np.ndarray:
        """K(1..n_max)."""
        pass

    @property
    def alpha(self) -> Optional[float]:
        """Tail exponent, None for non-polynomial tails."""
        return None

    @property
    def tail_constant(self) -> Optional[float]:
        """c_K with K(n) ~ c_K / n^{1+alpha}."""
        return None

    @property
    def mean(self) -> float:
        """sum_n n K(n); infinite when alpha <= 1."""
        return float("inf")

    @property
    def critical_point(self) -> float:
        """h_c = -log sum_n K(n)."""
        return -float(np.log(self.total_mass))

    def describe(self) -> str:
        return self.__class__.__name__
