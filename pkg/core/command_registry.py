"""
Command Registry

This module provides a central registry for the toolkit's CLI subcommands.

The Command Registry is responsible for:
1. Registering and tracking subcommands
2. Preventing duplicate command registration
3. Grouping commands by persona (provider or developer)

Critical:
- Commands must have unique names
- Commands register themselves at import time of core.commands
"""

import logging
from typing import Dict, Iterator, List

from .commands.base import BaseCommand
from .error_handler import ConfigurationError

logger = logging.getLogger(__name__)


class CommandRegistry:
    """
    Central registry for CLI subcommands.

    Attributes:
        _commands (Dict[str, BaseCommand]): Maps command names to instances
        command_groups (Dict[str, List[BaseCommand]]): Persona name to commands
    """

    def __init__(self):
        self._commands: Dict[str, BaseCommand] = {}
        self.command_groups: Dict[str, List[BaseCommand]] = {}

    def register_command(self, command: BaseCommand) -> None:
        """
        Register a command under its persona group.

        Args:
            command: The command to register

        Raises:
            ConfigurationError: If the command name is already registered
        """
        if command.name in self._commands:
            raise ConfigurationError(f"Command {command.name} is already registered")
        group = command.persona
        self._commands[command.name] = command
        self.command_groups.setdefault(group, []).append(command)
        logger.debug(f"Registered command: {command.name} in group: {group}")

    def secret_readers(self) -> List[str]:
        """Names of the commands allowed to open the secret file."""
        return sorted(name for name, command in self._commands.items() if command.reads_secret)

    def __len__(self) -> int:
        return len(self._commands)

    def __iter__(self) -> Iterator[BaseCommand]:
        return iter(self._commands.values())


# Global registry instance
registry = CommandRegistry()
