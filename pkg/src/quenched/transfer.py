"""Grid transfer operator for the Laplacian pinning integral.

The integrand is carried as a function F(phi_{k-1}, phi_k) of the last two
heights. One step integrates phi_{k-1} against the pinning measure
eps delta_0 + dphi and multiplies by the kernel of the next Laplacian term:

    F'(y, z) = sum_x F(x, y) w(x) K_k(z - 2y + x)

On a uniform grid the kernel values depend on ix - 2 iy + iz only, so the
sum is one matrix product with a Hankel matrix followed by a gather. The
atom at zero is an extra state with weight eps. Every step is renormalized
in the log domain, and one forward pass yields all sizes up to n_max.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import hankel, solveh_banded

from src.config import (
    LOG_SQRT_2PI,
    RenewalConfig,
    TransferConfig,
    get_default_renewal_config,
    get_default_transfer_config,
)
from src.core.base import BondPotential
from src.core.potential import GaussianBondPotential
from src.detkit.matrix import full_bands
from src.models.params import DisorderVector, ModelParams
from src.models.results import METHOD_TRANSFER, PartitionValue
from src.models.validation import ValidationError, validate_size, validate_weights
from src.partition.base import DEFAULT_CONVENTION, BoundaryConvention, params_weights
from src.quenched.base import GridInadequacyError
from src.quenched.grid import TransferGrid
from src.renewal.base import ZCheckProvider


logger = logging.getLogger(__name__)

ROUNDOFF_ERROR = 1e-15


def free_field_radius(weights, config: Optional[TransferConfig] = None) -> float:
    """radius_factor standard deviations of the widest single-site marginal, at least min_radius.

    The variance diag(B^{-1}) is sampled at a few sites by banded solves.
    """
    config = config or get_default_transfer_config()
    b = validate_weights(weights)
    radius = config.min_radius
    if b.size >= 3:
        diag, off1, off2 = full_bands(b)
        size = diag.size
        bands = np.zeros((3, size))
        bands[2] = diag
        bands[1, 1:] = off1
        bands[0, 2:] = off2
        sites = np.unique([0, size // 4, size // 2, (3 * size) // 4, size - 1])
        rhs = np.zeros((size, sites.size))
        rhs[sites, np.arange(sites.size)] = 1.0
        solution = solveh_banded(bands, rhs)
        variance = float(np.max(solution[sites, np.arange(sites.size)]))
        radius = max(radius, config.radius_factor * math.sqrt(variance))
    return radius


def suggest_radius(weights, grid_size: Optional[int] = None,
                   config: Optional[TransferConfig] = None) -> float:
    """Grid radius for a fixed point count.

    The free-field radius, clipped at max_spacing * (grid_size // 2).

    Args:
        weights: Weights b_0..b_n
        grid_size: Number of grid points (defaults to the configuration)
        config: Transfer configuration

    Returns:
        Radius R
    """
    config = config or get_default_transfer_config()
    grid_size = grid_size or config.grid_size
    radius = free_field_radius(weights, config)
    cap = config.max_spacing * (grid_size // 2)
    if radius > cap:
        logger.warning(f"Suggested radius {radius:.2f} exceeds {cap:.2f} for {grid_size} points; clipping")
        radius = cap
    return radius


def adequate_grid(weights, config: Optional[TransferConfig] = None) -> TransferGrid:
    """Smallest grid holding both the free-field radius and a fine enough spacing.

    The radius is the free-field radius (or the configured one) and is never
    clipped. The spacing is at most max_spacing / sqrt(max(1, max b)), a fixed
    share of the narrowest term-kernel width. The point count starts at
    grid_size and grows as needed.

    Args:
        weights: Weights b_0..b_n
        config: Transfer configuration

    Returns:
        TransferGrid

    Raises:
        GridInadequacyError: If more than max_grid_size points are needed
    """
    config = config or get_default_transfer_config()
    b = validate_weights(weights)
    radius = config.radius or free_field_radius(b, config)
    spacing = config.max_spacing / math.sqrt(max(1.0, float(np.max(b))))
    size = max(config.grid_size, 2 * math.ceil(radius / spacing))
    if size > config.max_grid_size:
        logger.error(f"Radius {radius:.2f} at spacing {spacing:.3f} needs {size} points, "
                     f"above {config.max_grid_size}")
        raise GridInadequacyError(
            f"Size n={b.size - 1} needs {size} grid points for R={radius:.3f}; "
            f"the cap is {config.max_grid_size}",
            required_radius=radius,
            operation="grid_sizing",
        )
    return TransferGrid(size=size, radius=radius)


@dataclass
class TransferSweep:
    """Raw segment values for lattice sizes 1..n_max at each atom weight.

    Column n-1 holds the product of the n+1 normalized term kernels
    integrated over the free sites, i.e. the segment partition Z_{0,n+1}
    (or its no-double-return restriction), as mantissa * exp(log_scale).
    """
    eps: np.ndarray
    log_scale: np.ndarray
    mantissa: np.ndarray
    grid: TransferGrid
    no_double_return: bool = False

    @property
    def n_max(self) -> int:
        return self.mantissa.shape[1]

    def segment_log(self) -> np.ndarray:
        """log of the real part, -inf where it is not positive."""
        real = np.real(self.mantissa)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.where(real > 0, np.log(np.where(real > 0, real, 1.0)), -np.inf)
        return values + self.log_scale

    def lattice_log(self) -> np.ndarray:
        """log Z_n of the lattice of size n in column n-1."""
        return self.segment_log() + LOG_SQRT_2PI


class TransferOperator:
    """Transfer operator for a bond potential on a uniform grid."""

    def __init__(self, potential: Optional[BondPotential] = None,
                 config: Optional[TransferConfig] = None):
        self.potential = potential or GaussianBondPotential()
        self.config = config or get_default_transfer_config()
        self.logger = logging.getLogger(self.__class__.__name__)
        self._kernels: Dict[Tuple[int, float, int], np.ndarray] = {}
        self._hankels: Dict[Tuple[int, float, int], np.ndarray] = {}

    def grid_for(self, n: int, grid_size: Optional[int] = None,
                 radius: Optional[float] = None) -> TransferGrid:
        """Grid for lattices up to size n; the radius is suggested unless fixed."""
        size = grid_size or self.config.grid_size
        radius = radius or self.config.radius
        if radius is None:
            radius = suggest_radius(self.potential.effective_weights(n), size, self.config)
        return TransferGrid(size=size, radius=radius)

    def _key(self, m: int, grid: TransferGrid) -> Tuple[int, float, int]:
        return (0 if self.potential.homogeneous else m, grid.radius, grid.size)

    def _term_kernel(self, m: int, grid: TransferGrid) -> np.ndarray:
        """K_m at offsets k h for k = -2(G-1)..2(G-1)."""
        key = self._key(m, grid)
        if key not in self._kernels:
            reach = 2 * (grid.size - 1)
            offsets = np.arange(-reach, reach + 1) * grid.spacing
            self._kernels[key] = self.potential.kernel(m, offsets)
        return self._kernels[key]

    def _term_hankel(self, m: int, grid: TransferGrid) -> np.ndarray:
        """H[i, j] = K_m((i + j - 2(G-1)) h)."""
        key = self._key(m, grid)
        if key not in self._hankels:
            values = self._term_kernel(m, grid)
            matrix = hankel(values[:grid.size], values[grid.size - 1:])
            if not self.potential.homogeneous:
                return matrix
            self._hankels[key] = matrix
        return self._hankels[key]

    def _check_terms(self, n_max: int) -> None:
        available = self.potential.max_terms
        if available is not None and available < n_max + 1:
            raise ValidationError(
                f"Potential provides {available} terms, size {n_max} needs {n_max + 1}", "n"
            )

    def sweep(self, eps, n_max: int, no_double_return: bool = False,
              convention: BoundaryConvention = DEFAULT_CONVENTION,
              grid: Optional[TransferGrid] = None, band: float = 0.0) -> TransferSweep:
        """Propagate once and record every size 1..n_max.

        Args:
            eps: Atom weight or array of weights (complex allowed)
            n_max: Largest lattice size
            no_double_return: Forbid contacts on adjacent sites
            convention: Boundary convention of the restricted sets
            grid: Grid (defaults to grid_for(n_max))
            band: Share of the radius removed from the outside of the grid

        Returns:
            TransferSweep with one row per atom weight
        """
        validate_size(n_max, 1, "n_max")
        self._check_terms(n_max)
        eps_arr = np.atleast_1d(np.asarray(eps))
        dtype = complex if np.iscomplexobj(eps_arr) else float
        if dtype is float and np.any(eps_arr < 0):
            raise ValidationError("Atom weights must be nonnegative", "eps")
        grid = grid or self.grid_for(n_max)
        size, center = grid.size, grid.center
        reach = 2 * (size - 1)
        count = eps_arr.size
        start_time = time.time()
        if n_max * size >= 2 ** 15:
            self.logger.info(f"Starting transfer sweep to n={n_max} on {size} points, "
                             f"R={grid.radius:.3f}, {count} weight(s)")

        states = np.append(np.arange(size), center)
        weights = np.empty((count, size + 1), dtype=dtype)
        weights[:, :size] = grid.weights
        if band > 0:
            weights[:, :size][:, grid.outer_mask(band)] = 0.0
        weights[:, size] = eps_arr
        closing = weights.copy()
        if no_double_return and convention.exclude_last:
            closing[:, size] = 0.0
        gather = states[None, :] - 2 * states[:, None] + reach
        rows = np.arange(size + 1)[:, None]

        log_scale = np.zeros((count, n_max))
        mantissa = np.zeros((count, n_max), dtype=dtype)
        first = self._term_kernel(0, grid)
        mantissa[:, 0] = first[reach] * self._term_kernel(1, grid)[reach]

        if n_max >= 2:
            pair = first[states - center + reach][:, None] * self._term_kernel(1, grid)[gather + center]
            state = np.repeat(pair[None, :, :], count, axis=0).astype(dtype)
            if no_double_return:
                state[:, size, size] = 0.0
                if convention.exclude_first:
                    state[:, size, :] = 0.0
            accumulated = np.zeros(count)
            for n in range(2, n_max + 1):
                closing_kernel = self._term_kernel(n, grid)[states - center + reach]
                mantissa[:, n - 1] = np.einsum("ex,ex,x->e", state[:, :, center], closing,
                                               closing_kernel)
                log_scale[:, n - 1] = accumulated
                if n == n_max:
                    break
                weighted = state * weights[:, :, None]
                product = np.swapaxes(weighted, 1, 2) @ self._term_hankel(n, grid)[states]
                state = product[:, rows, gather]
                if no_double_return:
                    state[:, size, size] = 0.0
                peak = np.max(np.abs(state), axis=(1, 2))
                peak[peak == 0] = 1.0
                state /= peak[:, None, None]
                accumulated += np.log(peak)
                self.logger.debug(f"Step {n}: log scale {accumulated.max():.6f}")

        if n_max * size >= 2 ** 15:
            self.logger.info(f"Completed transfer sweep to n={n_max} in {time.time() - start_time:.2f}s")
        return TransferSweep(eps=eps_arr, log_scale=log_scale, mantissa=mantissa, grid=grid,
                             no_double_return=no_double_return)

    def audit(self, eps: float, n: int, grid: TransferGrid, no_double_return: bool = False,
              convention: BoundaryConvention = DEFAULT_CONVENTION,
              reference: Optional[float] = None) -> float:
        """Relative change of the size-n value when the outer band of the grid is removed."""
        if reference is None:
            reference = self.sweep(eps, n, no_double_return, convention, grid).segment_log()[0, -1]
        if reference == -math.inf:
            return 0.0
        cut = self.sweep(eps, n, no_double_return, convention, grid,
                         band=self.config.audit_band).segment_log()[0, -1]
        return abs(math.expm1(cut - reference))

    def require_adequate(self, eps: float, n: int, grid: TransferGrid,
                         no_double_return: bool = False,
                         convention: BoundaryConvention = DEFAULT_CONVENTION,
                         reference: Optional[float] = None) -> float:
        """Run the audit and raise if it exceeds the configured tolerance.

        Raises:
            GridInadequacyError: With the radius to retry with
        """
        change = self.audit(eps, n, grid, no_double_return, convention, reference)
        if change > self.config.audit_tolerance:
            suggested = suggest_radius(self.potential.effective_weights(n), grid.size, self.config)
            required = max(1.5 * grid.radius, suggested)
            self.logger.error(f"Boundary band carries relative mass {change:.3e} at R={grid.radius:.3f}")
            raise GridInadequacyError(
                f"Grid radius {grid.radius:.3f} too small for n={n}: boundary change {change:.3e}; "
                f"retry with R >= {required:.3f}",
                required_radius=required,
            )
        return change

    def log_partition(self, eps: float, n: int, grid: Optional[TransferGrid] = None,
                      audit: bool = True) -> float:
        """log Z_n of the lattice of size n."""
        grid = grid or self.grid_for(n)
        raw = float(self.sweep(eps, n, grid=grid).segment_log()[0, -1])
        if audit:
            self.require_adequate(eps, n, grid, reference=raw)
        return raw + LOG_SQRT_2PI


def transfer_log_partition(params: ModelParams, disorder: Optional[DisorderVector] = None,
                           grid: Optional[TransferGrid] = None,
                           potential: Optional[BondPotential] = None,
                           config: Optional[TransferConfig] = None,
                           audit: bool = True) -> PartitionValue:
    """log Z_n from the transfer operator.

    Args:
        params: beta, eps and the lattice size n (>= 2)
        disorder: Charges; the Gaussian weights exp(beta omega) are used unless
            a potential is given
        grid: Grid (auto radius when omitted)
        potential: Bond potential overriding the Gaussian one
        config: Transfer configuration
        audit: Check the outer band of the grid

    Returns:
        PartitionValue tagged transfer_grid

    Raises:
        GridInadequacyError: If the audit fails
    """
    validate_size(params.n, 2)
    if potential is None:
        b = params_weights(params, disorder)
        potential = GaussianBondPotential(None if params.beta == 0 or disorder is None else b)
    operator = TransferOperator(potential, config)
    return PartitionValue(
        log_value=operator.log_partition(params.eps, params.n, grid, audit),
        n=params.n,
        beta=params.beta,
        eps=params.eps,
        seed=None if disorder is None else disorder.seed,
        method=METHOD_TRANSFER,
    )


@dataclass
class RefinementReport:
    """Relative errors against an exact value on a grid and on its refinement."""
    size: int
    radius: float
    coarse_error: float
    fine_error: float

    @property
    def order(self) -> float:
        """Observed order log2(coarse / fine); fine errors below roundoff count as roundoff."""
        return math.log2(self.coarse_error / max(self.fine_error, ROUNDOFF_ERROR))

    def to_dict(self) -> Dict[str, float]:
        return {"size": self.size, "radius": self.radius, "coarse_error": self.coarse_error,
                "fine_error": self.fine_error, "order": self.order}


def grid_refinement(params: ModelParams, exact_log: float, grid: TransferGrid,
                    disorder: Optional[DisorderVector] = None) -> RefinementReport:
    """Error of the transfer value on a grid and on the same radius with twice the points.

    Args:
        params: beta, eps and the lattice size n
        exact_log: Reference log Z_n, e.g. from enumeration
        grid: Coarse grid
        disorder: Charges for beta > 0

    Returns:
        RefinementReport
    """
    errors = []
    for current in (grid, grid.refined()):
        value = transfer_log_partition(params, disorder, current, audit=False).log_value
        errors.append(abs(math.expm1(value - exact_log)))
    report = RefinementReport(size=grid.size, radius=grid.radius, coarse_error=errors[0],
                              fine_error=errors[1])
    logger.debug(f"Grid refinement at R={grid.radius}: {errors[0]:.3e} -> {errors[1]:.3e}")
    return report


def polynomial_degree(length: int, convention: BoundaryConvention = DEFAULT_CONVENTION) -> int:
    """Largest contact count of a no-double-return segment of the given length."""
    if length < 3:
        return 0
    return int(math.ceil(len(convention.candidates(length)) / 2))


class TransferZCheck(ZCheckProvider):
    """No-double-return segment coefficients of a homogeneous potential.

    Ž_{0,L} is a polynomial in eps; it is evaluated by a single batched sweep
    at eps_j = r exp(2 pi i j / D) and its coefficients are recovered by a
    discrete Fourier transform.
    """

    def __init__(self, potential: Optional[BondPotential] = None,
                 convention: BoundaryConvention = DEFAULT_CONVENTION,
                 grid_size: Optional[int] = None, radius: Optional[float] = None,
                 config: Optional[TransferConfig] = None,
                 renewal_config: Optional[RenewalConfig] = None,
                 audit: bool = True):
        super().__init__()
        self.operator = TransferOperator(potential, config)
        if not self.operator.potential.homogeneous:
            raise ValidationError("Coefficient tables need a homogeneous potential", "potential")
        self.convention = convention
        self.grid_size = grid_size
        self.radius = radius
        self.interpolation_radius = (renewal_config or get_default_renewal_config()).interpolation_radius
        self.audit = audit

    @property
    def label(self) -> str:
        return f"transfer:{self.operator.potential.describe()}"

    def log_coefficients(self, n: int) -> np.ndarray:
        return self.all_log_coefficients(n)[n - 1]

    def all_log_coefficients(self, n_max: int) -> List[np.ndarray]:
        validate_size(n_max, 1, "n_max")
        head = [np.array([math.log(self.operator.potential.kernel_at_zero(0))]), np.array([-np.inf])]
        if n_max <= 2:
            return head[:n_max]

        lattice_max = n_max - 1
        points = polynomial_degree(n_max, self.convention) + 1
        r = self.interpolation_radius
        nodes = r * np.exp(2j * np.pi * np.arange(points) / points)
        grid = self.operator.grid_for(lattice_max, self.grid_size, self.radius)
        sweep = self.operator.sweep(nodes, lattice_max, True, self.convention, grid)
        if self.audit:
            self.operator.require_adequate(r, lattice_max, grid, True, self.convention)

        powers = r ** np.arange(points)
        result = list(head)
        for length in range(3, n_max + 1):
            column = length - 2
            scale = sweep.log_scale[:, column]
            reference = float(scale.max())
            values = np.exp(scale - reference) * sweep.mantissa[:, column]
            coefficients = (np.fft.fft(values) / points / powers).real
            coefficients = coefficients[: polynomial_degree(length, self.convention) + 1]
            peak = float(np.max(np.abs(coefficients)))
            negative = coefficients < 0
            if np.any(coefficients < -1e-10 * peak):
                self.logger.warning(f"Clipped negative interpolated coefficients at L={length}: "
                                    f"{coefficients[negative].tolist()}")
            with np.errstate(divide="ignore"):
                logs = np.where(negative | (coefficients == 0), -np.inf,
                                np.log(np.abs(coefficients))) + reference
            result.append(logs)
        return result
