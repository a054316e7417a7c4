"""
Command Router

This module builds the command-line parser from the registry and routes
each invocation to its command.

The Command Router is responsible for:
1. Building one argparse subparser per registered command
2. Running pre_execute validation, then execute
3. Logging the command lifecycle (started, completed, failed)
4. Handing failures to the ErrorHandler for an exit code

Critical:
- Usage errors from argparse exit with code 2
- Commands never signal an attack outcome through the exit code
"""

import argparse
import logging
from typing import List, Optional

from .command_registry import CommandRegistry
from .commands.base import DEVELOPER, PROVIDER
from .error_handler import EXIT_USAGE, ErrorHandler
from .log_config import log_command

logger = logging.getLogger(__name__)

PROG = 'mole'
DESCRIPTION = (
    "Privacy-preserving data delivery by morphing. Provider commands create "
    "and apply the secret; developer commands never read it."
)


class CommandRouter:
    """
    Routes parsed arguments to registered commands.

    Attributes:
        registry (CommandRegistry): Source of commands
        settings: Active Settings
        error_handler (ErrorHandler): Maps failures to exit codes
    """

    def __init__(self, registry: CommandRegistry, settings, error_handler: Optional[ErrorHandler] = None):
        self.registry = registry
        self.settings = settings
        self.error_handler = error_handler or ErrorHandler()

    def build_parser(self) -> argparse.ArgumentParser:
        """One subparser per command, provider commands listed first."""
        parser = argparse.ArgumentParser(prog=PROG, description=DESCRIPTION)
        subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
        subparsers.required = True
        for group in (PROVIDER, DEVELOPER):
            for command in self.registry.command_groups.get(group, []):
                sub = subparsers.add_parser(
                    command.name,
                    help=f"[{group}] {command.description}",
                    description=command.description,
                )
                command.add_arguments(sub)
                sub.set_defaults(handler=command)
        return parser

    def dispatch(self, argv: Optional[List[str]] = None) -> int:
        """
        Parse argv and run the selected command.

        Returns:
            int: Process exit code
        """
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_USAGE if e.code not in (0, None) else 0

        command = args.handler
        log_command(logger, command.name, 'started', {'persona': command.persona})
        try:
            command.pre_execute(args, self.settings)
            code = command.execute(args, self.settings)
        except (Exception, KeyboardInterrupt) as e:
            log_command(logger, command.name, 'failed', {'error_type': type(e).__name__})
            return self.error_handler.handle(e, {'command': command.name})
        log_command(logger, command.name, 'completed', {'exit_code': code})
        return code
