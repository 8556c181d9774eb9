"""Tests for the self-test checks and command-level validation."""

import pytest

from src.cli.commands import selftest_checks
from src.cli.main import EXIT_INVALID_CONFIG, run


DETERMINISTIC_CHECKS = (
    "renewal identity n=3 eps=0.5",
    "asymptote ratio positive",
    "asymptote variation shrinks as delta -> 0",
    "right derivative f/delta -> 0",
    "power-law exponent alpha=0.5",
    "log-corrected ratio alpha=1",
    "transfer order under grid doubling",
    "quenched F_n at eps=0",
    "certifier parameters beta=0.5 c=0.1",
)


@pytest.fixture(scope="module")
def quick_checks():
    """Self-test rows in quick mode."""
    return {row["check"]: row for row in selftest_checks(seed=3, quick=True)}


class TestSelfTestChecks:
    """Test cases for selftest_checks."""

    def test_row_layout(self, quick_checks):
        """Test the keys of every row."""
        for row in quick_checks.values():
            assert set(row) == {"check", "value", "expected", "passed"}
            assert isinstance(row["passed"], bool)

    @pytest.mark.parametrize("name", DETERMINISTIC_CHECKS)
    def test_deterministic_checks_pass(self, quick_checks, name):
        """Test the checks that do not depend on sampling."""
        assert quick_checks[name]["passed"]

    def test_covers_every_module(self, quick_checks):
        """Test that quick mode still reaches each module."""
        names = " ".join(quick_checks)
        for fragment in ("determinant", "T_n", "delocalized free energy", "transfer vs enumeration",
                         "Hölder", "moment recursion", "tilted expectation", "subadditive"):
            assert fragment in names

    def test_quick_skips_slow_runs(self, quick_checks):
        """Test that the sandwich and certificate runs are left to the full suite."""
        assert not any(name.startswith("sandwich") for name in quick_checks)
        assert "certificate sweep" not in quick_checks


class TestRenewalValidation:
    """Test cases for renewal reward validation."""

    @pytest.mark.parametrize("grid", ["0.0,1.0", "-0.5"])
    def test_nonpositive_rewards(self, grid):
        """Test that rewards must be positive."""
        assert run(["renewal", "--eps-grid", grid]) == EXIT_INVALID_CONFIG
