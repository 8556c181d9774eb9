"""Command-line entry point: python -m src.cli <command> [flags]."""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional

import pydantic

from src.cli import commands  # noqa: F401  (registers the subcommands)
from src.cli.artifacts import write_artifact
from src.cli.base import ConsistencyError, get_command_registry
from src.cli.schema import load_run_config
from src.config import DEFAULT_THREADS_ENV
from src.models.validation import NumericalError, ValidationError


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_CONSISTENCY = 3

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

# (flag, dest, type, help); grids are parsed by the schema
PARAMETER_FLAGS = (
    ("--beta", "beta", float, "disorder strength"),
    ("--betas", "betas", str, "beta grid, start:stop:count or comma list"),
    ("--eps", "eps", float, "pinning reward"),
    ("--eps-grid", "eps_grid", str, "reward grid, start:stop:count or comma list"),
    ("--eps-range", "eps_range", str, "bisection bracket lo,hi for the quenched critical point"),
    ("--n", "n", int, "system size"),
    ("--sizes", "sizes", str, "comma list of system sizes"),
    ("--nmax", "n_max", int, "truncation of the no-double-return table"),
    ("--grid-size", "grid_size", int, "transfer grid size G"),
    ("--radius", "radius", float, "transfer grid radius R"),
    ("--n-samples", "n_samples", int, "disorder realizations per estimate"),
    ("--seed", "seed", int, "master seed"),
    ("--c", "c", float, "certifier shift constant"),
    ("--cs", "cs", str, "grid of certifier shift constants"),
    ("--tolerance", "tolerance", float, "bisection tolerance"),
    ("--kernel", "kernel", str, "pinning kernel: power, geometric or telescoping"),
    ("--alpha", "alpha", float, "power-law tail exponent"),
    ("--q", "q", float, "geometric kernel ratio"),
    ("--offsets", "offsets", str, "grid of h - h_c values"),
    ("--delta-h", "delta_h", float, "h - h_c of the log-corrected ratio"),
    ("--n-instances", "n_instances", int, "random instances for det-verify"),
    ("--method", "method", str, "free-energy method: quenched, annealed or both"),
)


class CLIArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors map onto the invalid-config exit code."""

    def error(self, message: str):
        raise ValidationError(message, "argv")


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per registered command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", dest="config_path", default=None,
                        help="JSON file with run configuration; flags override it")
    common.add_argument("--output", default=None, help="artifact path (stdout if omitted)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker cap (default from {DEFAULT_THREADS_ENV}, else 1)")
    common.add_argument("--log-level", choices=LOG_LEVELS, default="WARNING")
    common.add_argument("--quick", action="store_true", default=None,
                        help="reduced sizes for a fast run")
    for flag, dest, kind, text in PARAMETER_FLAGS:
        common.add_argument(flag, dest=dest, type=kind, default=None, help=text)

    parser = CLIArgumentParser(
        prog="python -m src.cli",
        description="Laplacian pinning model: exact values, renewal solvers, "
                    "disorder averages and fractional-moment certificates",
    )
    subparsers = parser.add_subparsers(dest="command", required=True,
                                       parser_class=CLIArgumentParser)
    registry = get_command_registry()
    for name in registry.names():
        subparsers.add_parser(name, parents=[common], help=registry.describe(name))
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = [dest for _, dest, _, _ in PARAMETER_FLAGS] + ["output", "format", "threads", "quick"]
    return {key: getattr(args, key) for key in keys}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, run and write the artifact.

    Returns:
        Exit code: 0 success, 1 invalid configuration, 2 numerical
        precondition failure, 3 failed consistency check
    """
    previous_threads = os.environ.get(DEFAULT_THREADS_ENV)
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=args.log_level, stream=sys.stderr,
                            format="%(asctime)s %(name)s %(levelname)s %(message)s")
        config = load_run_config(args.command, args.config_path, _overrides(args))
        if config.threads is not None:
            os.environ[DEFAULT_THREADS_ENV] = str(config.threads)
        artifact = get_command_registry().run(config)
        write_artifact(artifact, config.replay_fields(), config.format, config.output)
        if artifact.failures:
            raise ConsistencyError(
                f"{len(artifact.failures)} check(s) failed: {'; '.join(artifact.failures)}",
                config.command
            )
        return EXIT_OK
    except pydantic.ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_INVALID_CONFIG
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e.message}")
        return EXIT_INVALID_CONFIG
    except NumericalError as e:
        logger.error(f"Numerical precondition failed [{e.error_code}]: {e.message}")
        return EXIT_NUMERICAL
    except ConsistencyError as e:
        logger.error(f"Consistency check failed: {e.message}")
        return EXIT_CONSISTENCY
    finally:
        if previous_threads is None:
            os.environ.pop(DEFAULT_THREADS_ENV, None)
        else:
            os.environ[DEFAULT_THREADS_ENV] = previous_threads


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
