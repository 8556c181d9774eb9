"""Contraction test for the fractional moments and the resulting gap certificate.

At eps = eps_c^a(beta) e^delta the fractional moments satisfy a renewal-type
recursion. When

    rho = eps^{2 gamma} sum_{s=0}^{k} A_s C_beta^gamma sum_{n>k} (n - s + 1)^{-2 gamma} <= 1

the moments stay bounded, the quenched free energy vanishes at that reward,
and log eps_c(beta) - log eps_c^a(beta) >= delta. A failed test is an
inconclusive result, not evidence against a gap.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
from scipy.special import zeta

from src.config import DEFAULT_SEED, DEFAULT_SIGMA_LEVEL, CertifierConfig, get_default_certifier_config
from src.fm.base import ParameterError
from src.fm.moments import (
    CBetaFit,
    MomentEstimate,
    annealed_zcheck,
    fit_c_beta,
    fractional_moment,
    log_moment_bounds,
)
from src.fm.params import FMParams, choose_params
from src.models.results import METHOD_TRANSFER
from src.models.validation import validate_positive, validate_size
from src.quenched.estimators import annealed_table
from src.renewal.solver import critical_point


logger = logging.getLogger(__name__)

VERDICT_CERTIFIED = "certified"
VERDICT_INCONCLUSIVE = "not certified"
VERDICT_REJECTED = "rejected"


@dataclass
class RhoEstimate:
    """rho with its propagated standard error and per-size contributions."""
    value: float
    stderr: float
    terms: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def rho_estimate(params: FMParams, eps: float, c_beta: CBetaFit,
                 a_table: List[MomentEstimate]) -> RhoEstimate:
    """Evaluate rho; the n-sum is the Hurwitz zeta value zeta(2 gamma, k - s + 2).

    Args:
        params: Certifier parameters
        eps: Reward at which the moments were computed
        c_beta: Decay constant of the annealed no-double-return partition
        a_table: A_0..A_k

    Returns:
        RhoEstimate

    Raises:
        ParameterError: If 2 gamma <= 1 or the table is shorter than k + 1
    """
    validate_positive(eps, "eps")
    k, gamma = params.k, params.gamma
    if 2.0 * gamma <= 1.0:
        raise ParameterError(f"2 gamma = {2 * gamma:.4f} <= 1; the n-sum diverges", "gamma")
    if len(a_table) < k + 1:
        raise ParameterError(f"Moment table covers {len(a_table)} sizes, need {k + 1}", "a_table")
    if c_beta.value <= 0:
        raise ParameterError(f"C_beta must be positive, got {c_beta.value}", "c_beta")

    s = np.arange(k + 1)
    tails = zeta(2.0 * gamma, k - s + 2.0)
    moments = np.array([a.value for a in a_table[: k + 1]])
    errors = np.array([a.stderr for a in a_table[: k + 1]])
    scale = eps ** (2.0 * gamma) * c_beta.value ** gamma
    terms = scale * tails * moments
    value = float(terms.sum())
    variance = float(np.sum((scale * tails * errors) ** 2))
    variance += (gamma * value * c_beta.stderr / c_beta.value) ** 2
    return RhoEstimate(value=value, stderr=math.sqrt(variance), terms=terms.tolist())


def moment_table(params: FMParams, eps: float, n_samples: int, seed: int,
                 config: Optional[CertifierConfig] = None) -> List[MomentEstimate]:
    """A_0..A_k: Monte Carlo up to the enumeration cap, deterministic bounds above it."""
    config = config or get_default_certifier_config()
    k = params.k
    cap = min(k, config.enumeration_cap)
    table = [fractional_moment(s, params.gamma, params.beta, eps, n_samples, seed, config)
             for s in range(cap + 1)]
    if k > cap:
        logger.info(f"Bounding A_s for s={cap + 1}..{k} by annealed sweeps")
        bounds = np.exp(log_moment_bounds(params, eps, k, config))
        table.extend(MomentEstimate(s=s, value=float(bounds[s]), method=METHOD_TRANSFER)
                     for s in range(cap + 1, k + 1))
    return table


@dataclass
class GapCertificate:
    """Outcome of the contraction test at one (beta, c)."""
    beta: float
    c: float
    gamma: float
    k: int
    delta: float
    lam: float
    eps_c_annealed: float
    eps: float
    c_beta: float
    c_beta_stderr: float
    rho: float
    rho_stderr: float
    moments: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.rho + DEFAULT_SIGMA_LEVEL * self.rho_stderr <= 1.0

    @property
    def verdict(self) -> str:
        return VERDICT_CERTIFIED if self.certified else VERDICT_INCONCLUSIVE

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data.update(verdict=self.verdict, certified=self.certified)
        return data


def certify_gap(beta: float, c: float, eps_c_annealed: Optional[float] = None,
                n_samples: Optional[int] = None, seed: int = DEFAULT_SEED,
                config: Optional[CertifierConfig] = None) -> GapCertificate:
    """Run the contraction test at eps = eps_c^a(beta) e^delta.

    Args:
        beta: Disorder strength (> 0)
        c: Shift constant
        eps_c_annealed: Annealed critical reward; computed from an annealed
            renewal table when omitted
        n_samples: Realizations per Monte Carlo moment
        seed: Master seed
        config: Certifier configuration

    Returns:
        GapCertificate carrying every intermediate quantity

    Raises:
        ParameterError: If (beta, c) is not admissible
    """
    config = config or get_default_certifier_config()
    n_samples = n_samples or config.n_samples
    params = choose_params(beta, c)
    if eps_c_annealed is None:
        eps_c_annealed = critical_point(annealed_table(beta, transfer_config=config.transfer)).value
    validate_positive(eps_c_annealed, "eps_c_annealed")
    eps = eps_c_annealed * math.exp(params.delta)
    logger.info(f"Starting certification beta={beta} c={c}: k={params.k}, gamma={params.gamma:.4f}, "
                f"eps={eps:.6f}")

    c_beta = fit_c_beta(beta, eps, config=config)
    table = moment_table(params, eps, n_samples, seed, config)
    rho = rho_estimate(params, eps, c_beta, table)
    certificate = GapCertificate(
        beta=beta, c=c, gamma=params.gamma, k=params.k, delta=params.delta, lam=params.lam,
        eps_c_annealed=eps_c_annealed, eps=eps, c_beta=c_beta.value, c_beta_stderr=c_beta.stderr,
        rho=rho.value, rho_stderr=rho.stderr, moments=[a.to_dict() for a in table],
    )
    logger.info(f"Completed certification beta={beta} c={c}: rho={rho.value:.4f} +- {rho.stderr:.1e} "
                f"-> {certificate.verdict}")
    return certificate


def certify_sweep(betas: Iterable[float], cs: Iterable[float], n_samples: Optional[int] = None,
                  seed: int = DEFAULT_SEED,
                  config: Optional[CertifierConfig] = None) -> List[Dict[str, Any]]:
    """Certificate rows over a (beta, c) grid; inadmissible pairs are reported as rejected."""
    config = config or get_default_certifier_config()
    cs = list(cs)
    rows = []
    for beta in betas:
        eps_c_annealed = None
        for c in cs:
            row = {"beta": beta, "c": c}
            try:
                choose_params(beta, c)
                if eps_c_annealed is None:
                    table = annealed_table(beta, transfer_config=config.transfer)
                    eps_c_annealed = critical_point(table).value
                certificate = certify_gap(beta, c, eps_c_annealed, n_samples, seed, config)
            except ParameterError as e:
                row.update(verdict=VERDICT_REJECTED, reason=e.message)
                rows.append(row)
                continue
            row.update(k=certificate.k, gamma=certificate.gamma, delta=certificate.delta,
                       rho=certificate.rho, rho_stderr=certificate.rho_stderr,
                       verdict=certificate.verdict)
            rows.append(row)
    found = sum(1 for row in rows if row["verdict"] == VERDICT_CERTIFIED)
    logger.info(f"Certificate sweep: {found} certified of {len(rows)}")
    return rows


@dataclass
class RecursionReport:
    """Both sides of the moment recursion for N = 1..n_max."""
    k: int
    eps: float
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def recursion_check(params: FMParams, eps: float, n_max: int = 16, n_samples: int = 256,
                    seed: int = DEFAULT_SEED,
                    config: Optional[CertifierConfig] = None) -> RecursionReport:
    """Estimate A_N and eps^{2 gamma} sum_{n=k+1}^N A_{N-n} sum_s (E Ž_adj(n-s))^gamma A_s.

    The right side is an empty sum, hence zero, for N <= k; those rows are
    marked not applicable. The report is informational.
    """
    config = config or get_default_certifier_config()
    validate_size(n_max, 1, "n_max")
    if n_max > config.enumeration_cap:
        raise ParameterError(f"n_max={n_max} exceeds the enumeration cap {config.enumeration_cap}", "n_max")
    gamma, k = params.gamma, params.k
    moments = [fractional_moment(s, gamma, params.beta, eps, n_samples, seed, config)
               for s in range(n_max + 1)]
    values = np.array([a.value for a in moments])
    zcheck = annealed_zcheck(params.beta, eps, n_max, config) ** gamma

    rows = []
    for size in range(1, n_max + 1):
        rhs = 0.0
        for n in range(k + 1, size + 1):
            inner = sum(zcheck[n - s - 1] * values[s] for s in range(0, min(k, n - 1) + 1))
            rhs += values[size - n] * inner
        rhs *= eps ** (2.0 * gamma)
        applicable = size > k
        rows.append({"N": size, "lhs": float(values[size]), "lhs_stderr": moments[size].stderr,
                     "rhs": float(rhs), "applicable": applicable,
                     "holds": (not applicable) or values[size] <= rhs + DEFAULT_SIGMA_LEVEL * moments[size].stderr})
    return RecursionReport(k=k, eps=eps, rows=rows)
