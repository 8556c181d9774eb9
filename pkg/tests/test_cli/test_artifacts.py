"""Tests for artifact rendering."""

import json

import numpy as np

from src.cli.artifacts import Artifact, plain, render, render_csv, render_json, write_artifact


CONFIG = {"command": "renewal", "eps_grid": [0.5, 1.0], "format": "csv"}


class TestPlain:
    """Test cases for plain."""

    def test_numpy_values(self):
        """Test conversion of numpy scalars and arrays."""
        value = plain({"a": np.float64(0.5), "b": np.int64(3), "c": np.array([1.0, 2.0]),
                       "d": np.bool_(True), "e": (1, 2)})
        assert value == {"a": 0.5, "b": 3, "c": [1.0, 2.0], "d": True, "e": [1, 2]}
        assert type(value["a"]) is float
        assert type(value["d"]) is bool


class TestArtifact:
    """Test cases for Artifact."""

    def test_columns_first_seen(self):
        """Test column order without declared columns."""
        artifact = Artifact(rows=[{"a": 1, "b": 2}, {"c": 3, "a": 4}])
        assert artifact.column_names() == ["a", "b", "c"]

    def test_declared_columns(self):
        """Test declared columns."""
        artifact = Artifact(rows=[{"a": 1}], columns=("a", "reason"))
        assert artifact.column_names() == ["a", "reason"]

    def test_passed(self):
        """Test the failure flag."""
        assert Artifact().passed
        assert not Artifact(failures=["x"]).passed


class TestRender:
    """Test cases for CSV and JSON rendering."""

    def test_csv_layout(self):
        """Test the comment lines, header and cell formats."""
        artifact = Artifact(rows=[{"eps": 1.0 / 3.0, "ok": True, "note": None, "k": 48}],
                            summary={"eps_c": 1.25})
        lines = render_csv(artifact, CONFIG).splitlines()
        assert lines[0] == "# config: " + json.dumps(CONFIG, sort_keys=True)
        assert lines[1] == '# summary: {"eps_c": 1.25}'
        assert lines[2] == "eps,ok,note,k"
        assert lines[3] == f"{1.0 / 3.0!r},true,,48"

    def test_csv_without_rows(self):
        """Test a summary-only artifact."""
        text = render_csv(Artifact(summary={"passed": True}), CONFIG)
        assert text.count("\n") == 2

    def test_json_document(self):
        """Test the JSON document."""
        artifact = Artifact(rows=[{"F": np.float64(0.1)}], summary={"n": 2}, failures=["f"])
        document = json.loads(render_json(artifact, CONFIG))
        assert document["config"] == CONFIG
        assert document["rows"] == [{"F": 0.1}]
        assert document["summary"] == {"n": 2}
        assert document["failures"] == ["f"]

    def test_dispatch(self):
        """Test format selection."""
        artifact = Artifact(rows=[{"a": 1}])
        assert render(artifact, CONFIG, "json").startswith("{")
        assert render(artifact, CONFIG, "csv").startswith("# config: ")

    def test_deterministic(self):
        """Test byte-identical output for equal inputs."""
        artifact = Artifact(rows=[{"b": 2.0, "a": 1.0}], summary={"z": 1, "y": 2})
        assert render_csv(artifact, dict(CONFIG)) == render_csv(artifact, dict(CONFIG))


class TestWriteArtifact:
    """Test cases for write_artifact."""

    def test_file(self, temp_dir):
        """Test writing into a new directory."""
        path = temp_dir / "nested" / "out.csv"
        text = write_artifact(Artifact(rows=[{"a": 1}]), CONFIG, "csv", str(path))
        assert path.read_text(encoding="utf-8") == text

    def test_stdout(self, capsys):
        """Test writing to stdout."""
        text = write_artifact(Artifact(rows=[{"a": 1}]), CONFIG, "csv", "-")
        assert capsys.readouterr().out == text
