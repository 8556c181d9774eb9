"""Tests for the contraction test and gap certificates."""

import math

import mpmath
import pytest

from src.config import CertifierConfig, TransferConfig
from src.fm.base import ParameterError
from src.fm.certify import (
    VERDICT_CERTIFIED,
    VERDICT_INCONCLUSIVE,
    VERDICT_REJECTED,
    GapCertificate,
    certify_gap,
    certify_sweep,
    moment_table,
    recursion_check,
    rho_estimate,
)
from src.fm.moments import CBetaFit, MomentEstimate
from src.fm.params import FMParams, choose_params
from src.models.results import METHOD_ENUMERATION, METHOD_MONTE_CARLO, METHOD_TRANSFER


@pytest.fixture
def fast_config():
    """Low enumeration cap, few samples and a coarse grid."""
    return CertifierConfig(enumeration_cap=4, n_samples=8, c_beta_range=(6, 10),
                           transfer=TransferConfig(grid_size=128))


def _unit_table(size, stderr=0.0):
    return [MomentEstimate(s=s, value=1.0, stderr=stderr) for s in range(size)]


def _certificate(rho, rho_stderr):
    return GapCertificate(beta=0.5, c=0.1, gamma=0.74, k=48, delta=0.02, lam=0.13,
                          eps_c_annealed=1.0, eps=1.02, c_beta=0.1, c_beta_stderr=0.0,
                          rho=rho, rho_stderr=rho_stderr)


class TestRhoEstimate:
    """Test cases for rho_estimate."""

    def test_unit_moments(self):
        """Test the Hurwitz zeta sum for A_s = C = eps = 1."""
        params = choose_params(0.5, 0.1)
        rho = rho_estimate(params, 1.0, CBetaFit(value=1.0, stderr=0.0), _unit_table(49))
        two_gamma = 2.0 * params.gamma
        expected = sum(float(mpmath.zeta(two_gamma, 48 - s + 2)) for s in range(49))
        assert rho.value == pytest.approx(expected, rel=1e-10)
        assert rho.stderr == 0.0
        assert len(rho.terms) == 49

    def test_scaling(self):
        """Test rho proportional to eps^{2 gamma} C^gamma."""
        params = choose_params(0.5, 0.1)
        table = _unit_table(49)
        base = rho_estimate(params, 1.0, CBetaFit(value=1.0, stderr=0.0), table).value
        scaled = rho_estimate(params, 2.0, CBetaFit(value=3.0, stderr=0.0), table).value
        factor = 2.0 ** (2 * params.gamma) * 3.0 ** params.gamma
        assert scaled == pytest.approx(factor * base, rel=1e-12)

    def test_error_propagation(self):
        """Test the relative error contributed by C."""
        params = choose_params(0.5, 0.1)
        rho = rho_estimate(params, 1.0, CBetaFit(value=2.0, stderr=0.2), _unit_table(49))
        assert rho.stderr == pytest.approx(params.gamma * rho.value * 0.1)

    def test_moment_errors(self):
        """Test that moment errors increase the standard error."""
        params = choose_params(0.5, 0.1)
        quiet = rho_estimate(params, 1.0, CBetaFit(value=1.0, stderr=0.0), _unit_table(49))
        noisy = rho_estimate(params, 1.0, CBetaFit(value=1.0, stderr=0.0), _unit_table(49, 0.1))
        assert noisy.value == quiet.value
        assert noisy.stderr > 0

    def test_short_table(self):
        """Test a table with fewer than k + 1 entries."""
        params = choose_params(0.5, 0.1)
        with pytest.raises(ParameterError, match="need 49"):
            rho_estimate(params, 1.0, CBetaFit(value=1.0, stderr=0.0), _unit_table(10))

    def test_divergent_sum(self):
        """Test 2 gamma <= 1."""
        params = FMParams(beta=0.5, c=0.1, delta=0.01, k=5, lam=0.1, gamma=0.4)
        with pytest.raises(ParameterError, match="diverges"):
            rho_estimate(params, 1.0, CBetaFit(value=1.0, stderr=0.0), _unit_table(6))

    def test_nonpositive_constant(self):
        """Test C <= 0."""
        params = choose_params(0.5, 0.1)
        with pytest.raises(ParameterError, match="C_beta"):
            rho_estimate(params, 1.0, CBetaFit(value=0.0, stderr=0.0), _unit_table(49))


class TestGapCertificate:
    """Test cases for the certificate verdict."""

    def test_certified(self):
        """Test rho + 3 sigma <= 1."""
        certificate = _certificate(0.5, 0.1)
        assert certificate.certified
        assert certificate.verdict == VERDICT_CERTIFIED

    def test_inconclusive(self):
        """Test a value below one whose error bar crosses it."""
        certificate = _certificate(0.9, 0.1)
        assert not certificate.certified
        assert certificate.verdict == VERDICT_INCONCLUSIVE
        assert certificate.to_dict()["verdict"] == "not certified"


class TestCertifyGap:
    """Test cases for certify_gap and moment_table."""

    def test_moment_table(self, fast_config):
        """Test Monte Carlo up to the cap and bounds above it."""
        params = FMParams(beta=0.5, c=0.1, delta=0.01, k=7, lam=0.13, gamma=0.7)
        table = moment_table(params, 1.0, 8, 3, fast_config)
        assert len(table) == 8
        assert table[0].method == METHOD_ENUMERATION
        assert table[4].method == METHOD_MONTE_CARLO
        assert table[5].method == METHOD_TRANSFER
        assert all(a.value > 0 for a in table)

    def test_full_run(self, fast_config):
        """Test every intermediate quantity at beta = 0.5, c = 0.1."""
        certificate = certify_gap(0.5, 0.1, eps_c_annealed=1.0, seed=5, config=fast_config)
        assert certificate.k == 48
        assert certificate.eps == pytest.approx(math.exp(certificate.delta))
        assert len(certificate.moments) == 49
        assert certificate.c_beta > 0
        assert certificate.rho > 0
        assert certificate.verdict in (VERDICT_CERTIFIED, VERDICT_INCONCLUSIVE)

    def test_reproducible(self, fast_config):
        """Test identical certificates for the same seed."""
        first = certify_gap(0.5, 0.2, eps_c_annealed=1.0, seed=5, config=fast_config)
        second = certify_gap(0.5, 0.2, eps_c_annealed=1.0, seed=5, config=fast_config)
        assert first.to_dict() == second.to_dict()

    def test_rejected_parameters(self):
        """Test c >= 1/4 before any computation."""
        with pytest.raises(ParameterError):
            certify_gap(0.5, 0.3, eps_c_annealed=1.0)


class TestCertifySweep:
    """Test cases for certify_sweep."""

    def test_rejected_rows(self):
        """Test that inadmissible pairs become rejected rows."""
        rows = certify_sweep([0.0, 0.5], [0.3])
        assert [row["verdict"] for row in rows] == [VERDICT_REJECTED, VERDICT_REJECTED]
        assert "beta" in rows[0]["reason"]
        assert "1/4" in rows[1]["reason"]


class TestRecursionCheck:
    """Test cases for recursion_check."""

    def test_rows(self):
        """Test the empty right side up to k and positive values beyond."""
        params = FMParams(beta=0.5, c=0.1, delta=0.01, k=3, lam=0.13, gamma=0.7)
        config = CertifierConfig(enumeration_cap=8, transfer=TransferConfig(grid_size=128))
        report = recursion_check(params, 1.0, n_max=6, n_samples=16, seed=2, config=config)
        assert report.k == 3
        assert [row["N"] for row in report.rows] == list(range(1, 7))
        for row in report.rows[:3]:
            assert not row["applicable"]
            assert row["rhs"] == 0.0
            assert row["holds"]
        for row in report.rows[3:]:
            assert row["applicable"]
            assert row["rhs"] > 0

    def test_cap(self):
        """Test n_max above the enumeration cap."""
        params = FMParams(beta=0.5, c=0.1, delta=0.01, k=3, lam=0.13, gamma=0.7)
        with pytest.raises(ParameterError, match="cap"):
            recursion_check(params, 1.0, n_max=20, config=CertifierConfig(enumeration_cap=8))
