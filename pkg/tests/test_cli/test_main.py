"""End-to-end tests for the command-line entry point."""

import json
import os
from unittest.mock import patch

import pytest

from src.cli.artifacts import Artifact
from src.cli.base import CommandRegistry
from src.cli.main import (
    EXIT_CONSISTENCY,
    EXIT_INVALID_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    run,
)
from src.config import DEFAULT_THREADS_ENV
from src.models.validation import NumericalError


CONFIG_PREFIX = "# config: "


def _data_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


class TestRenewalRun:
    """Test cases for the renewal command."""

    @pytest.fixture
    def renewal_output(self, temp_dir):
        """Renewal curve on fifty rewards written to a file."""
        path = temp_dir / "renewal.csv"
        code = run(["renewal", "--eps-grid", "0.5:2.0:50", "--nmax", "20",
                    "--output", str(path)])
        assert code == EXIT_OK
        return path

    def test_rows(self, renewal_output):
        """Test one header and fifty data rows."""
        lines = _data_lines(renewal_output.read_text())
        assert lines[0] == "beta,eps,F,stderr,method"
        assert len(lines) == 51

    def test_config_line(self, renewal_output):
        """Test the embedded configuration."""
        first = renewal_output.read_text().splitlines()[0]
        assert first.startswith(CONFIG_PREFIX)
        embedded = json.loads(first[len(CONFIG_PREFIX):])
        assert embedded["command"] == "renewal"
        assert embedded["n_max"] == 20
        assert len(embedded["eps_grid"]) == 50
        assert "output" not in embedded

    def test_rerun_identical(self, renewal_output, temp_dir):
        """Test byte-identical output on a second run."""
        second = temp_dir / "again.csv"
        assert run(["renewal", "--eps-grid", "0.5:2.0:50", "--nmax", "20",
                    "--output", str(second)]) == EXIT_OK
        assert second.read_bytes() == renewal_output.read_bytes()

    def test_replay_from_config(self, renewal_output, temp_dir):
        """Test replaying the embedded configuration."""
        first = renewal_output.read_text().splitlines()[0]
        config_path = temp_dir / "replay.json"
        config_path.write_text(first[len(CONFIG_PREFIX):])
        replay = temp_dir / "replay.csv"
        assert run(["renewal", "--config", str(config_path), "--output", str(replay)]) == EXIT_OK
        assert replay.read_bytes() == renewal_output.read_bytes()


class TestExitCodes:
    """Test cases for exit-code mapping."""

    @pytest.mark.parametrize("argv", [
        ["renewal", "--eps-grid", "1.0", "--seed", "-1"],
        ["renewal"],
        ["pinning", "--kernel", "power"],
        ["renewal", "--eps-grid", "1.0", "--unknown-flag", "3"],
        ["no-such-command"],
        ["renewal", "--eps-grid", "1.0", "--config", "/nonexistent/run.json"],
    ])
    def test_invalid_config(self, argv):
        """Test invalid configurations."""
        assert run(argv) == EXIT_INVALID_CONFIG

    def test_numerical(self, temp_dir):
        """Test a numerical precondition failure."""
        error = NumericalError("grid too small", "transfer", "GRID_INADEQUATE")
        with patch.object(CommandRegistry, "run", side_effect=error):
            code = run(["renewal", "--eps-grid", "1.0", "--output", str(temp_dir / "out.csv")])
        assert code == EXIT_NUMERICAL

    def test_consistency(self, temp_dir):
        """Test failed checks with the artifact still written."""
        path = temp_dir / "out.csv"
        artifact = Artifact(rows=[{"eps": 1.0}], failures=["F mismatch"])
        with patch.object(CommandRegistry, "run", return_value=artifact):
            code = run(["renewal", "--eps-grid", "1.0", "--output", str(path)])
        assert code == EXIT_CONSISTENCY
        assert path.exists()
        assert _data_lines(path.read_text()) == ["eps", "1.0"]

    def test_threads_restored(self, temp_dir):
        """Test that the worker cap does not leak into the environment."""
        previous = os.environ.get(DEFAULT_THREADS_ENV)
        with patch.object(CommandRegistry, "run", return_value=Artifact()):
            run(["renewal", "--eps-grid", "1.0", "--threads", "3",
                 "--output", str(temp_dir / "out.csv")])
        assert os.environ.get(DEFAULT_THREADS_ENV) == previous


class TestOtherCommands:
    """Test cases for the remaining deterministic commands."""

    def test_pinning_json(self, temp_dir):
        """Test the geometric kernel in JSON."""
        path = temp_dir / "pinning.json"
        code = run(["pinning", "--kernel", "geometric", "--q", "0.5",
                    "--format", "json", "--output", str(path)])
        assert code == EXIT_OK
        document = json.loads(path.read_text())
        assert len(document["rows"]) == 12
        assert document["summary"]["h_c"] == 0.0
        assert all(row["f"] > 0 for row in document["rows"])

    def test_partition(self, temp_dir):
        """Test exact partition rows."""
        path = temp_dir / "partition.csv"
        assert run(["partition", "--sizes", "3,4", "--eps", "0.5",
                    "--output", str(path)]) == EXIT_OK
        lines = _data_lines(path.read_text())
        assert len(lines) == 3
        assert lines[0].startswith("n,eps")

    def test_partition_requires_seed_with_disorder(self):
        """Test the seed requirement when beta > 0."""
        assert run(["partition", "--n", "4", "--eps", "0.5", "--beta", "0.5"]) == EXIT_INVALID_CONFIG

    def test_stdout(self, capsys):
        """Test writing to stdout."""
        assert run(["partition", "--n", "3", "--eps", "1.0", "--format", "json"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["rows"][0]["n"] == 3
