"""
CLI subcommands.

Each module defines one command class and registers an instance with the
global registry when imported; load_commands() imports them all.
"""

import importlib

COMMAND_MODULES = (
    'keygen', 'morph', 'unmorph', 'build_augconv',
    'kernels', 'conv_matrix', 'apply', 'attack', 'analyze',
)


def load_commands() -> None:
    """Import every command module so each registers itself."""
    for name in COMMAND_MODULES:
        importlib.import_module(f'{__name__}.{name}')
