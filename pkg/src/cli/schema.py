"""Run configuration schema for the command line."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.validation import MAX_SEED, ValidationError


logger = logging.getLogger(__name__)

# Keys that never reach an artifact; output bytes must not depend on them.
RUNTIME_KEYS = {"threads", "output"}


def parse_grid(value: Any) -> Any:
    """Expand "start:stop:count" into a linspace, "a,b,c" into a list.

    Other values pass through unchanged for the schema to check.
    """
    if not isinstance(value, str):
        return value
    text = value.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"Grid '{value}' must read start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError(f"Grid '{value}' needs a positive count")
        return np.linspace(start, stop, count).tolist()
    return [float(part) for part in text.split(",") if part.strip()]


class RunConfig(BaseModel):
    """Everything needed to replay one command.

    Flags override values loaded from a JSON file. Unknown keys are rejected.
    """
    model_config = ConfigDict(extra="forbid")

    command: str
    beta: Optional[float] = Field(default=None, ge=0)
    betas: Optional[List[float]] = None
    eps: Optional[float] = Field(default=None, ge=0)
    eps_grid: Optional[List[float]] = None
    eps_range: Optional[List[float]] = None
    n: Optional[int] = Field(default=None, ge=1)
    sizes: Optional[List[int]] = None
    n_max: Optional[int] = Field(default=None, ge=3)
    grid_size: Optional[int] = Field(default=None, ge=16)
    radius: Optional[float] = Field(default=None, gt=0)
    n_samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=MAX_SEED)
    c: Optional[float] = Field(default=None, gt=0)
    cs: Optional[List[float]] = None
    tolerance: Optional[float] = Field(default=None, gt=0)
    kernel: Optional[Literal["power", "geometric", "telescoping"]] = None
    alpha: Optional[float] = Field(default=None, gt=0)
    q: Optional[float] = Field(default=None, gt=0, lt=1)
    offsets: Optional[List[float]] = None
    delta_h: Optional[float] = Field(default=None, gt=0)
    n_instances: Optional[int] = Field(default=None, ge=1)
    method: Optional[Literal["quenched", "annealed", "both"]] = None
    quick: bool = False
    threads: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @field_validator("betas", "eps_grid", "eps_range", "cs", "offsets", mode="before")
    @classmethod
    def _expand_grid(cls, value):
        return parse_grid(value)

    @field_validator("sizes", mode="before")
    @classmethod
    def _expand_sizes(cls, value):
        if isinstance(value, str):
            return [int(part) for part in value.split(",") if part.strip()]
        return value

    @model_validator(mode="after")
    def _check_grids(self) -> "RunConfig":
        for name in ("betas", "eps_grid", "cs", "offsets", "sizes"):
            values = getattr(self, name)
            if values is not None and len(values) == 0:
                raise ValueError(f"{name} must not be empty")
        if self.betas is not None and min(self.betas) < 0:
            raise ValueError("betas must be nonnegative")
        if self.eps_grid is not None and min(self.eps_grid) < 0:
            raise ValueError("eps_grid must be nonnegative")
        if self.eps_range is not None:
            if len(self.eps_range) != 2 or not 0 < self.eps_range[0] < self.eps_range[1]:
                raise ValueError("eps_range must be two increasing positive rewards")
        if self.offsets is not None and min(self.offsets) <= 0:
            raise ValueError("offsets must be positive")
        return self

    def replay_fields(self) -> Dict[str, Any]:
        """Configuration as embedded in artifacts: set keys only, runtime keys dropped."""
        return self.model_dump(exclude=RUNTIME_KEYS, exclude_none=True)

    def beta_values(self, default: float = 0.0) -> List[float]:
        """betas if given, else [beta], else [default]."""
        if self.betas is not None:
            return list(self.betas)
        return [self.beta if self.beta is not None else default]

    def eps_values(self) -> List[float]:
        """eps_grid if given, else [eps]; empty if neither is set."""
        if self.eps_grid is not None:
            return list(self.eps_grid)
        return [] if self.eps is None else [self.eps]


def load_run_config(command: str, config_path: Optional[Union[str, Path]] = None,
                    overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Merge a JSON config file with flag overrides and validate.

    Args:
        command: Command name; takes precedence over the file
        config_path: Optional JSON file with RunConfig keys
        overrides: Flag values; None entries do not override

    Returns:
        Validated RunConfig

    Raises:
        ValidationError: If the file cannot be read or is not a JSON object
        pydantic.ValidationError: If the merged values violate the schema
    """
    data: Dict[str, Any] = {}
    if config_path is not None:
        path = Path(config_path)
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"Cannot read config file {path}: {e}", "config")
        if not isinstance(data, dict):
            raise ValidationError(f"Config file {path} must hold a JSON object", "config")
        logger.debug(f"Loaded {len(data)} keys from {path}")
    data.update({key: value for key, value in (overrides or {}).items() if value is not None})
    data["command"] = command
    return RunConfig(**data)
