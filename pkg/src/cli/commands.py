"""Batch pipelines exposed as subcommands."""

import math
from typing import Any, Dict, List

import numpy as np

from src.cli.artifacts import Artifact
from src.cli.base import Command, register_command
from src.cli.schema import RunConfig
from src.config import (
    DEFAULT_ORACLE_RADIUS,
    DEFAULT_SEED,
    DEFAULT_SIGMA_LEVEL,
    RenewalConfig,
    TransferConfig,
    get_default_certifier_config,
    get_default_renewal_config,
    get_default_transfer_config,
)
from src.core.disorder import sample_disorder
from src.core.gaussian import mgf
from src.detkit.closed_form import det_closed_form
from src.detkit.suite import delocalized_determinant, run_property_suite
from src.fm.certify import (
    VERDICT_CERTIFIED,
    VERDICT_INCONCLUSIVE,
    VERDICT_REJECTED,
    certify_sweep,
    recursion_check,
)
from src.fm.moments import (
    fractional_moment,
    gaussian_c_m,
    holder_bound_check,
    subadditive_bound,
    tilt_weight_mean,
    tilted_expectation,
)
from src.fm.params import choose_params
from src.models.params import ModelParams
from src.models.validation import ValidationError
from src.partition.base import DEFAULT_CONVENTION
from src.partition.enumeration import partition_enumerate
from src.partition.io import PARTITION_COLUMNS, partition_rows
from src.partition.renewal_check import renewal_identity_check, select_boundary_convention
from src.partition.statistics import log_partition_delocalized, superadditivity_check, tn_statistic
from src.quenched.estimators import (
    annealed_free_energy,
    annealed_table,
    critical_point_bisect,
    jensen_check,
    quenched_free_energy,
)
from src.quenched.grid import TransferGrid
from src.quenched.io import FREE_ENERGY_COLUMNS, PHASE_COLUMNS, free_energy_row, phase_report, phase_rows
from src.quenched.sandwich import annealed_partition_bounds, sandwich_check
from src.quenched.transfer import grid_refinement, transfer_log_partition
from src.renewal.base import PinningKernel
from src.renewal.kernels import (
    GeometricKernel,
    PowerLawKernel,
    TelescopingKernel,
    exponent_fit,
    log_corrected_ratio,
    pinning_curve,
)
from src.renewal.solver import asymptote_constant, critical_point, free_energy_curve, renewal_theorem_check
from src.renewal.table import EnumerationZCheck, build_table


DEFAULT_PINNING_OFFSETS = tuple(np.geomspace(1e-3, 1e-1, 12).tolist())
DEFAULT_DELTA_H = 1e-4
DEFAULT_FREE_ENERGY_SIZE = 24
DEFAULT_PHASE_SIZE = 16
DEFAULT_PHASE_TOLERANCE = 1e-2
DEFAULT_CERTIFY_CS = (0.05, 0.1, 0.2)
TRANSFER_ORACLE_TOLERANCE = 1e-4
RENEWAL_IDENTITY_TOLERANCE = 1e-12
RENEWAL_THEOREM_TOLERANCE = 2e-2
DELOCALIZED_RATE_TOLERANCE = 1e-3
LOG_CORRECTED_TOLERANCE = 0.2
ZERO_REWARD_TOLERANCE = 1e-6
REFINEMENT_GRID = TransferGrid(64, 24.0)
SANDWICH_BETAS = (0.25, 0.5, 1.0)
SHORT_BLOCK = (1.0, 0.12)  # (beta, c) giving k = 4
CHECK_EPS = 1.0
RECURSION_SIZE = 16


def _transfer_config(config: RunConfig) -> TransferConfig:
    transfer = get_default_transfer_config()
    if config.grid_size is not None:
        transfer.grid_size = config.grid_size
    if config.radius is not None:
        transfer.radius = config.radius
    return transfer


def _renewal_config(config: RunConfig) -> RenewalConfig:
    renewal = get_default_renewal_config()
    if config.n_max is not None:
        renewal.n_max = config.n_max
    return renewal


@register_command
class DetVerifyCommand(Command):
    """Closed-form, banded, split and structure checks on random instances."""

    name = "det-verify"
    description = "determinant property suite"
    stochastic = True

    def run(self, config: RunConfig) -> Artifact:
        n_instances = config.n_instances or 200
        report = run_property_suite(n_instances=n_instances, seed=config.seed)
        summary = report.to_dict()
        summary.pop("elapsed", None)
        failures = list(report.failures)
        failures.extend(f"integer formula n={n}" for n in report.exact_failures)
        return Artifact(summary=summary, failures=failures)


@register_command
class PartitionCommand(Command):
    """Exact enumeration dump of log Z, the adjusted partition and log Ž."""

    name = "partition"
    description = "exact partition functions by contact enumeration"

    def check_config(self, config: RunConfig) -> None:
        super().check_config(config)
        if config.sizes is None and config.n is None:
            raise ValidationError("Command 'partition' requires: n or sizes", "n")
        if not config.eps_values():
            raise ValidationError("Command 'partition' requires: eps or eps_grid", "eps")
        if (config.beta or 0.0) > 0 and config.seed is None:
            raise ValidationError("Command 'partition' requires a seed when beta > 0", "seed")

    def run(self, config: RunConfig) -> Artifact:
        sizes = config.sizes or [config.n]
        beta = config.beta or 0.0
        disorder = None
        if beta > 0:
            disorder = sample_disorder(max(sizes), config.seed)
        rows = partition_rows(sizes, config.eps_values(), beta, disorder)
        return Artifact(rows=rows, columns=PARTITION_COLUMNS)


@register_command
class RenewalCommand(Command):
    """Homogeneous (or annealed) free-energy curve, critical point and asymptote."""

    name = "renewal"
    description = "renewal free-energy curve and critical point"
    required = ("eps_grid",)

    def check_config(self, config: RunConfig) -> None:
        super().check_config(config)
        nonpositive = [eps for eps in config.eps_grid if eps <= 0]
        if nonpositive:
            raise ValidationError(f"Command 'renewal' needs rewards eps > 0, got {nonpositive}",
                                  "eps_grid")

    def run(self, config: RunConfig) -> Artifact:
        beta = config.beta or 0.0
        renewal = _renewal_config(config)
        table = annealed_table(beta, renewal.n_max, config.grid_size, config.radius,
                               transfer_config=_transfer_config(config), renewal_config=renewal)
        eps_c = critical_point(table)
        curve = free_energy_curve(table, config.eps_grid, renewal)
        rows = [free_energy_row(beta, eps, estimate) for eps, estimate in zip(config.eps_grid, curve)]

        failures = []
        for row in rows:
            if row["eps"] < eps_c.lower and row["F"] != 0.0:
                failures.append(f"F={row['F']!r} at eps={row['eps']!r} below eps_c")
            if row["eps"] > eps_c.upper and row["F"] <= 0.0:
                failures.append(f"F={row['F']!r} at eps={row['eps']!r} above eps_c")

        summary: Dict[str, Any] = {"eps_c": eps_c.to_dict(), "n_max": table.n_max,
                                   "source": table.source}
        if not config.quick:
            summary["asymptote"] = asymptote_constant(table, eps_c=eps_c.value,
                                                      config=renewal).to_dict()
        return Artifact(rows=rows, columns=FREE_ENERGY_COLUMNS, summary=summary, failures=failures)


def build_kernel(config: RunConfig) -> PinningKernel:
    """Pinning kernel named by the configuration."""
    kind = config.kernel or "power"
    if kind == "geometric":
        return GeometricKernel(config.q if config.q is not None else 0.5)
    if kind == "telescoping":
        return TelescopingKernel()
    if config.alpha is None:
        raise ValidationError("The power kernel requires alpha", "alpha")
    return PowerLawKernel(config.alpha)


@register_command
class PinningCommand(Command):
    """Free-energy curve and exponent of a generic renewal pinning model."""

    name = "pinning"
    description = "generic pinning free energy and critical exponent"

    def run(self, config: RunConfig) -> Artifact:
        kernel = build_kernel(config)
        offsets = config.offsets or list(DEFAULT_PINNING_OFFSETS)
        h_values = [kernel.critical_point + offset for offset in offsets]
        rows = pinning_curve(kernel, h_values)
        for row, offset in zip(rows, offsets):
            row["delta_h"] = offset
        summary: Dict[str, Any] = {
            "kernel": kernel.describe(),
            "h_c": kernel.critical_point,
            "alpha": kernel.alpha,
            "fit": exponent_fit(kernel, h_values).to_dict(),
        }
        if kernel.alpha == 1.0:
            summary["log_corrected"] = log_corrected_ratio(
                kernel, config.delta_h or DEFAULT_DELTA_H).to_dict()
        return Artifact(rows=rows, columns=("h", "delta_h", "f"), summary=summary)


@register_command
class FreeEnergyCommand(Command):
    """Quenched and/or annealed free-energy estimates on a reward grid."""

    name = "free-energy"
    description = "quenched and annealed free-energy estimates"
    required = ("eps_grid",)

    def check_config(self, config: RunConfig) -> None:
        super().check_config(config)
        if (config.method or "both") != "annealed" and config.seed is None:
            raise ValidationError("Command 'free-energy' requires: seed", "seed")

    def run(self, config: RunConfig) -> Artifact:
        method = config.method or "both"
        n = config.n or DEFAULT_FREE_ENERGY_SIZE
        transfer = _transfer_config(config)
        renewal = _renewal_config(config)
        rows = []
        for beta in config.beta_values():
            table = None
            if method != "quenched":
                table = annealed_table(beta, renewal.n_max, transfer_config=transfer,
                                       renewal_config=renewal)
            for eps in config.eps_grid:
                if method != "annealed":
                    estimate = quenched_free_energy(ModelParams(beta=beta, eps=eps, n=n),
                                                    config.n_samples, config.seed,
                                                    transfer_config=transfer)
                    rows.append(free_energy_row(beta, eps, estimate))
                if method != "quenched":
                    estimate = annealed_free_energy(beta, eps, table=table,
                                                    transfer_config=transfer,
                                                    renewal_config=renewal)
                    rows.append(free_energy_row(beta, eps, estimate))
        return Artifact(rows=rows, columns=FREE_ENERGY_COLUMNS)


@register_command
class PhaseCommand(Command):
    """Critical points per beta with the sandwich report."""

    name = "phase"
    description = "quenched and annealed critical points with sandwich bounds"
    stochastic = True

    def run(self, config: RunConfig) -> Artifact:
        n = config.n or DEFAULT_PHASE_SIZE
        transfer = _transfer_config(config)
        renewal = _renewal_config(config)
        entries = []
        for beta in config.beta_values(default=0.5):
            sandwich = sandwich_check(beta, renewal.n_max, config.grid_size,
                                      transfer_config=transfer, renewal_config=renewal)
            eps_c_annealed = sandwich.eps_c_annealed
            eps_c_quenched = None
            if not config.quick:
                lo, hi = config.eps_range or (0.5 * eps_c_annealed.value, 2.0 * eps_c_annealed.value)

                def estimate(eps: float, beta=beta):
                    return quenched_free_energy(ModelParams(beta=beta, eps=eps, n=n),
                                                config.n_samples, config.seed,
                                                transfer_config=transfer, estimator="slope")

                eps_c_quenched = critical_point_bisect(
                    estimate, lo, hi, tol=config.tolerance or DEFAULT_PHASE_TOLERANCE)
            entries.append(phase_report(beta, eps_c_quenched, eps_c_annealed,
                                        bounds=sandwich.to_dict()))
        rows = [row for entry in entries for row in phase_rows(entry)]
        failures = [f"phase check failed at beta={entry['beta']!r}" for entry in entries
                    if not entry["passed"]]
        return Artifact(rows=rows, columns=PHASE_COLUMNS, summary={"entries": entries},
                        failures=failures)


@register_command
class FMCertifyCommand(Command):
    """Fractional-moment gap certificates over a (beta, c) grid."""

    name = "fm-certify"
    description = "fractional-moment gap certificates"
    stochastic = True

    def run(self, config: RunConfig) -> Artifact:
        certifier = get_default_certifier_config()
        if config.grid_size is not None:
            certifier.transfer.grid_size = config.grid_size
        betas = config.beta_values(default=0.5)
        cs = config.cs or ([config.c] if config.c is not None else list(DEFAULT_CERTIFY_CS))
        rows = certify_sweep(betas, cs, config.n_samples, config.seed, certifier)
        return Artifact(rows=rows, columns=("beta", "c", "k", "gamma", "delta", "rho",
                                            "rho_stderr", "verdict", "reason"))


def _check(name: str, value: Any, expected: Any, passed: bool) -> Dict[str, Any]:
    return {"check": name, "value": value, "expected": expected, "passed": bool(passed)}


def _within(value: float, target: float, stderr: float, sigma: float = DEFAULT_SIGMA_LEVEL) -> bool:
    return abs(value - target) <= sigma * stderr


def _determinant_checks(seed: int, quick: bool) -> List[Dict[str, Any]]:
    checks = []
    report = run_property_suite(n_instances=20 if quick else 200, seed=seed,
                                split_instances=20 if quick else 100,
                                structure_instances=50 if quick else 500)
    checks.append(_check("determinant property suite", len(report.failures), 0, report.passed))
    for n in (2, 3, 10):
        exact = det_closed_form(np.ones(n + 1), exact=True)
        checks.append(_check(f"delocalized determinant n={n}", int(exact),
                             delocalized_determinant(n), exact == delocalized_determinant(n)))
    checks.append(_check("mgf(1)", mgf(1.0), math.exp(0.5),
                         math.isclose(mgf(1.0), math.exp(0.5), rel_tol=1e-14)))
    return checks


def _partition_checks(seed: int, quick: bool) -> List[Dict[str, Any]]:
    checks = []
    convention = select_boundary_convention(n_max=8)
    checks.append(_check("boundary convention", convention.label, DEFAULT_CONVENTION.label,
                         convention == DEFAULT_CONVENTION))
    residual = renewal_identity_check(0.5, 3)
    checks.append(_check("renewal identity n=3 eps=0.5", residual, 0.0,
                         residual < RENEWAL_IDENTITY_TOLERANCE))

    split_size = 10 if quick else 16
    superadditive = superadditivity_check(0.8, split_size, sample_disorder(split_size, seed), beta=0.5)
    checks.append(_check(f"super-additivity N={split_size}", superadditive.min_gap, ">= 0",
                         superadditive.holds))

    tn_size = 10_000 if quick else 100_000
    stat = tn_statistic(0.5, tn_size, sample_disorder(tn_size, seed))
    checks.append(_check(f"T_n law of large numbers n={tn_size}", stat.value, stat.limit,
                         stat.deviation_in_sigma() < DEFAULT_SIGMA_LEVEL))
    delocalized_size = 100_000 if quick else 1_000_000
    log_z = log_partition_delocalized(sample_disorder(delocalized_size, seed), 0.5).log_value
    rate = abs(log_z / delocalized_size)
    checks.append(_check(f"delocalized free energy n={delocalized_size}", rate, 0.0,
                         rate < DELOCALIZED_RATE_TOLERANCE))
    return checks


def _renewal_checks(quick: bool) -> List[Dict[str, Any]]:
    checks = []
    table = build_table(EnumerationZCheck(), 14 if quick else 20)
    eps_c = critical_point(table)
    theorem = renewal_theorem_check(table, 1.2 * eps_c.value)
    checks.append(_check("renewal theorem", theorem.relative_error, 0.0,
                         theorem.relative_error < RENEWAL_THEOREM_TOLERANCE))

    asymptote = asymptote_constant(table, eps_c=eps_c.value)
    variation = asymptote.relative_variation
    checks.append(_check("asymptote ratio positive", min(asymptote.ratio), "> 0",
                         min(asymptote.ratio) > 0))
    checks.append(_check("asymptote variation shrinks as delta -> 0",
                         [variation[0], variation[-1]], "first < last", variation[0] < variation[-1]))
    slopes = np.asarray(asymptote.slope)
    checks.append(_check("right derivative f/delta -> 0", slopes[0], "increasing in delta",
                         bool(np.all(np.diff(slopes) > 0))))

    for alpha, target, tolerance in ((2.0, 1.0, 0.05), (0.5, 2.0, 0.1)):
        kernel = PowerLawKernel(alpha)
        fit = exponent_fit(kernel, [kernel.critical_point + offset for offset in DEFAULT_PINNING_OFFSETS])
        checks.append(_check(f"power-law exponent alpha={alpha}", fit.exponent, target,
                             abs(fit.exponent - target) < tolerance))
    corrected = log_corrected_ratio(TelescopingKernel(), DEFAULT_DELTA_H)
    checks.append(_check("log-corrected ratio alpha=1", corrected.self_consistent, corrected.expected,
                         abs(corrected.self_consistent / corrected.expected - 1.0) < LOG_CORRECTED_TOLERANCE))
    return checks


def _quenched_checks(seed: int, quick: bool) -> List[Dict[str, Any]]:
    checks = []
    oracle_grid = TransferGrid(512, DEFAULT_ORACLE_RADIUS)
    cases = [(0.5, 1.0, 6)] if quick else [(beta, eps, 8) for beta in (0.0, 0.5, 1.0) for eps in (0.5, 2.0)]
    worst = 0.0
    for beta, eps, n in cases:
        params = ModelParams(beta=beta, eps=eps, n=n)
        disorder = sample_disorder(n, seed) if beta > 0 else None
        exact_log = partition_enumerate(params, disorder).log_value
        grid_log = transfer_log_partition(params, disorder, oracle_grid, audit=False).log_value
        worst = max(worst, abs(math.expm1(grid_log - exact_log)))
    checks.append(_check(f"transfer vs enumeration ({len(cases)} cases)", worst, 0.0,
                         worst < TRANSFER_ORACLE_TOLERANCE))

    params = ModelParams(beta=0.0, eps=1.0, n=6)
    refinement = grid_refinement(params, partition_enumerate(params).log_value, REFINEMENT_GRID)
    checks.append(_check("transfer order under grid doubling", refinement.order, ">= 2",
                         refinement.order >= 2.0))

    zero = quenched_free_energy(ModelParams(beta=0.0, eps=0.0, n=12 if quick else DEFAULT_FREE_ENERGY_SIZE))
    checks.append(_check("quenched F_n at eps=0", zero.value, 0.0,
                         abs(zero.value) < ZERO_REWARD_TOLERANCE))

    jensen = jensen_check(ModelParams(beta=0.5, eps=0.5, n=6), n_samples=8 if quick else 64, seed=seed)
    checks.append(_check("Jensen ordering n=6", jensen.quenched, jensen.annealed, jensen.holds))

    bounds = annealed_partition_bounds(0.5, 0.5, 6)
    checks.append(_check("annealed partition bounds n=6", bounds.log_mean,
                         [bounds.log_lower, bounds.log_upper], bounds.holds))
    if not quick:
        for beta in SANDWICH_BETAS:
            sandwich = sandwich_check(beta, n_max=16)
            checks.append(_check(f"sandwich beta={beta}", sandwich.ratio,
                                 [sandwich.lower_bound, sandwich.upper_bound], sandwich.passed))
    return checks


def _certifier_checks(seed: int, quick: bool) -> List[Dict[str, Any]]:
    checks = []
    c_m = gaussian_c_m()
    checks.append(_check("C_M", c_m, 0.5, abs(c_m - 0.5) < 1e-6))
    fm = choose_params(0.5, 0.1)
    checks.append(_check("certifier parameters beta=0.5 c=0.1", fm.k, 48, fm.k == 48))

    samples = 200 if quick else 2000
    density = tilt_weight_mean(4, 0.3, samples, seed)
    checks.append(_check("tilt density mean", density.value, 1.0,
                         _within(density.value, 1.0, density.stderr)))

    params = choose_params(*SHORT_BLOCK)
    config = get_default_certifier_config()
    config.enumeration_cap = RECURSION_SIZE
    exact = tilted_expectation(3, params, CHECK_EPS, method="exact", config=config)
    for method in ("weight", "shifted"):
        estimate = tilted_expectation(3, params, CHECK_EPS, samples, seed, method, config)
        checks.append(_check(f"tilted expectation {method} vs exact", estimate.value, exact.value,
                             _within(estimate.value, exact.value, estimate.stderr)))

    moment = fractional_moment(5, params.gamma, params.beta, CHECK_EPS, 64, seed, config)
    bound = subadditive_bound(5, params.gamma, params.beta, CHECK_EPS, 64, seed, config)
    checks.append(_check("subadditive bound s=5", moment.value, bound.value, moment.value <= bound.value))

    holder = holder_bound_check(3, params, CHECK_EPS, samples, seed, config)
    checks.append(_check("Hölder step s=3", holder.moment.value, holder.rhs, holder.holds))

    n_max = 8 if quick else RECURSION_SIZE
    recursion = recursion_check(params, CHECK_EPS, n_max=n_max, n_samples=32 if quick else 64,
                                seed=seed, config=config)
    failed = [row["N"] for row in recursion.rows if not row["holds"]]
    checks.append(_check(f"moment recursion N<={n_max}", failed, [], not failed))

    if not quick:
        rows = certify_sweep([0.5], [0.1, 0.3], n_samples=64, seed=seed)
        verdicts = [row["verdict"] for row in rows]
        well_formed = (len(rows) == 2 and verdicts[1] == VERDICT_REJECTED
                       and verdicts[0] in (VERDICT_CERTIFIED, VERDICT_INCONCLUSIVE)
                       and math.isfinite(rows[0]["rho"]))
        checks.append(_check("certificate sweep", verdicts, "one verdict per (beta, c)", well_formed))
    return checks


def selftest_checks(seed: int = DEFAULT_SEED, quick: bool = False) -> List[Dict[str, Any]]:
    """Oracle checks spanning every module at desk scale.

    quick shrinks sample counts and sizes and skips the sandwich and
    certificate runs.
    """
    checks = []
    checks.extend(_determinant_checks(seed, quick))
    checks.extend(_partition_checks(seed, quick))
    checks.extend(_renewal_checks(quick))
    checks.extend(_quenched_checks(seed, quick))
    checks.extend(_certifier_checks(seed, quick))
    logger.info(f"Self-test: {sum(check['passed'] for check in checks)} of {len(checks)} checks passed")
    return checks


@register_command
class SelfTestCommand(Command):
    """Desk-scale oracle suite; exits non-zero if any check fails."""

    name = "selftest"
    description = "oracle suite across all modules"

    def run(self, config: RunConfig) -> Artifact:
        seed = config.seed if config.seed is not None else DEFAULT_SEED
        rows = selftest_checks(seed, config.quick)
        failures = [row["check"] for row in rows if not row["passed"]]
        return Artifact(rows=rows, columns=("check", "value", "expected", "passed"),
                        summary={"seed": seed, "checks": len(rows)}, failures=failures)


__all__ = [
    'DetVerifyCommand',
    'PartitionCommand',
    'RenewalCommand',
    'PinningCommand',
    'FreeEnergyCommand',
    'PhaseCommand',
    'FMCertifyCommand',
    'SelfTestCommand',
    'build_kernel',
    'selftest_checks',
]
