"""Rendering of command results as replayable CSV or JSON."""

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


logger = logging.getLogger(__name__)

CONFIG_PREFIX = "# config: "
SUMMARY_PREFIX = "# summary: "


@dataclass
class Artifact:
    """Rows and/or a summary document produced by one command.

    failures lists the checks that did not pass; the artifact is still
    written so the failing values can be inspected.
    """
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    columns: Optional[Sequence[str]] = None
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def column_names(self) -> List[str]:
        """Declared columns, else keys in first-seen order across rows."""
        if self.columns is not None:
            return list(self.columns)
        names: List[str] = []
        for row in self.rows:
            names.extend(key for key in row if key not in names)
        return names


def plain(value: Any) -> Any:
    """Convert numpy scalars, arrays and tuples into JSON-native values."""
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [plain(item) for item in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _dumps(value: Any, **kwargs) -> str:
    return json.dumps(plain(value), sort_keys=True, **kwargs)


def _cell(value: Any) -> str:
    value = plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (dict, list)):
        return _dumps(value)
    return str(value)


def render_csv(artifact: Artifact, config: Dict[str, Any]) -> str:
    """CSV with the config and summary as leading comment lines."""
    buffer = io.StringIO()
    buffer.write(CONFIG_PREFIX + _dumps(config) + "\n")
    if artifact.summary:
        buffer.write(SUMMARY_PREFIX + _dumps(artifact.summary) + "\n")
    columns = artifact.column_names()
    if columns:
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in artifact.rows:
            writer.writerow([_cell(row.get(key)) for key in columns])
    return buffer.getvalue()


def render_json(artifact: Artifact, config: Dict[str, Any]) -> str:
    """One sorted-key JSON document holding config, rows, summary and failures."""
    document = {
        "config": config,
        "rows": artifact.rows,
        "summary": artifact.summary,
        "failures": artifact.failures,
    }
    return _dumps(document, indent=2) + "\n"


def render(artifact: Artifact, config: Dict[str, Any], fmt: str = "csv") -> str:
    """Render in the requested format."""
    if fmt == "json":
        return render_json(artifact, config)
    return render_csv(artifact, config)


def write_artifact(artifact: Artifact, config: Dict[str, Any], fmt: str = "csv",
                   output: Optional[str] = None) -> str:
    """Render and write to output, or to stdout when output is None or "-".

    Returns:
        The rendered text
    """
    text = render(artifact, config, fmt)
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return text
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(text)
    logger.info(f"Wrote {fmt} artifact with {len(artifact.rows)} rows to {path}")
    return text
