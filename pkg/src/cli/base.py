"""Command interface, registry and the consistency error for batch runs."""

from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Tuple
import logging

from src.cli.artifacts import Artifact
from src.cli.schema import RunConfig
from src.models.validation import NumericalError, ValidationError


logger = logging.getLogger(__name__)


class ConsistencyError(Exception):
    """Exception raised when an oracle or property check fails."""

    def __init__(self, message: str, command: str = "",
                 error_code: str = "CONSISTENCY_ERROR"):
        self.message = message
        self.command = command
        self.error_code = error_code
        super().__init__(self.message)


class Command(ABC):
    """One batch pipeline reachable from the command line."""

    name: str = ""
    description: str = ""
    required: Tuple[str, ...] = ()
    stochastic: bool = False

    def __init__(self):
        """Initialize the command."""
        self.logger = logging.getLogger(self.__class__.__name__)

    @abstractmethod
    def run(self, config: RunConfig) -> Artifact:
        """Execute the pipeline.

        Args:
            config: Validated run configuration

        Returns:
            Artifact holding rows and/or a summary document
        """
        pass

    def check_config(self, config: RunConfig) -> None:
        """Validate command-specific keys.

        Raises:
            ValidationError: If a required key is missing
        """
        missing = [key for key in self.required if getattr(config, key) is None]
        if self.stochastic and config.seed is None:
            missing.append("seed")
        if missing:
            raise ValidationError(
                f"Command '{self.name}' requires: {', '.join(missing)}", missing[0]
            )

    def run_with_validation(self, config: RunConfig) -> Artifact:
        """Check the configuration, run, and translate unexpected failures.

        Raises:
            ValidationError: If the configuration is incomplete
            NumericalError: If a numerical precondition fails
            ConsistencyError: If the run produced failed checks
        """
        self.check_config(config)
        self.logger.info(f"Starting command {self.name}")
        try:
            artifact = self.run(config)
        except (ValidationError, NumericalError, ConsistencyError) as e:
            self.logger.error(f"Command {self.name} failed: {e.message}")
            raise
        except Exception as e:
            error_msg = f"Unexpected error in {self.name}: {str(e)}"
            self.logger.error(error_msg)
            raise NumericalError(error_msg, self.name)
        self.logger.info(f"Completed command {self.name} ({len(artifact.rows)} rows)")
        return artifact


class CommandRegistry:
    """Registry mapping command names to command classes."""

    def __init__(self):
        """Initialize the registry."""
        self._commands: Dict[str, type] = {}
        self.logger = logging.getLogger(self.__class__.__name__)

    def register(self, command_class: type) -> None:
        """Register a command class under its name.

        Raises:
            ValueError: If command_class is not a Command subclass or has no name
        """
        if not isinstance(command_class, type) or not issubclass(command_class, Command):
            raise ValueError(
                f"Command class must be a subclass of Command, got {command_class!r}"
            )
        if not command_class.name:
            raise ValueError(f"Command class {command_class.__name__} has no name")
        self._commands[command_class.name] = command_class
        self.logger.debug(f"Registered command '{command_class.name}'")

    def create(self, name: str) -> Command:
        """Instantiate the command registered under name.

        Raises:
            ValidationError: If the command is unknown
        """
        if name not in self._commands:
            raise ValidationError(
                f"Unknown command: {name}. Available commands: {', '.join(self.names())}",
                "command"
            )
        return self._commands[name]()

    def names(self) -> List[str]:
        """Registered command names in registration order."""
        return list(self._commands.keys())

    def describe(self, name: str) -> str:
        return self._commands[name].description

    def run(self, config: RunConfig) -> Artifact:
        """Run the command named by the configuration."""
        return self.create(config.command).run_with_validation(config)


# Global registry instance
_global_registry: Optional[CommandRegistry] = None


def get_command_registry() -> CommandRegistry:
    """Get the global command registry instance."""
    global _global_registry
    if _global_registry is None:
        _global_registry = CommandRegistry()
    return _global_registry


def register_command(command_class: type) -> type:
    """Register a command class in the global registry; usable as a decorator."""
    get_command_registry().register(command_class)
    return command_class
