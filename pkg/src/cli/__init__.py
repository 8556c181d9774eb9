"""Command-line front end for reproducible batch runs."""

from .artifacts import Artifact, render, render_csv, render_json, write_artifact
from .base import Command, CommandRegistry, ConsistencyError, get_command_registry, register_command
from .schema import RunConfig, load_run_config, parse_grid

__all__ = [
    'Artifact',
    'render',
    'render_csv',
    'render_json',
    'write_artifact',
    'Command',
    'CommandRegistry',
    'ConsistencyError',
    'get_command_registry',
    'register_command',
    'RunConfig',
    'load_run_config',
    'parse_grid',
]
