"""
path: mole.py
purpose: Command-line entry point for the MoLe toolkit
critical:
- Loads .env before reading settings
- Configuration errors exit with code 2 before any command runs
- Every command registers itself through core.commands.load_commands()
"""

import logging
import sys
from typing import List, Optional

from config import load_environment, load_settings
from core.command_registry import registry
from core.command_router import CommandRouter
from core.commands import load_commands
from core.error_handler import ConfigurationError, ErrorHandler
from core.log_config import configure_logging

logger = logging.getLogger(__name__)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one toolkit command.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        int: Process exit code
    """
    load_environment()
    handler = ErrorHandler()
    try:
        settings = load_settings()
    except ConfigurationError as e:
        return handler.handle(e, {'stage': 'settings'})

    configure_logging(settings)
    load_commands()
    logger.debug("Commands loaded", extra={'details': {'count': len(registry)}})
    return CommandRouter(registry, settings, handler).dispatch(argv)


if __name__ == '__main__':
    sys.exit(main())
