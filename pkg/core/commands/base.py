"""
path: core/commands/base.py
purpose: Provides the base command class and shared argument helpers
critical:
- All commands inherit from BaseCommand
- Flags are validated in pre_execute, before any computation
- Only provider commands that declare reads_secret may open a secret file
"""

import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, List, Optional

from core.error_handler import EXIT_OK, ValidationError
from core.validation import GeometryValidator
from modules.d2r.lowering import output_side
from utils.helpers import FORMATS, emit

logger = logging.getLogger(__name__)

PROVIDER = 'provider'
DEVELOPER = 'developer'


class BaseCommand:
    """
    Base class for all CLI subcommands.

    Attributes:
        name (str): Subcommand name
        description (str): One-line help text
        persona (str): 'provider' or 'developer'
        reads_secret (bool): Whether the command may open the secret file
    """

    def __init__(self, name: str, description: str, persona: str, reads_secret: bool = False):
        self.name = name
        self.description = description
        self.persona = persona
        self.reads_secret = reads_secret

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Declare the command's flags. Subclasses extend this."""
        parser.add_argument('--format', choices=FORMATS, default='text',
                            help="Report format (default: text)")

    def pre_execute(self, args: argparse.Namespace, settings) -> None:
        """
        Validate flags before any work starts.

        Raises:
            ValidationError: On an invalid flag value
        """

    def execute(self, args: argparse.Namespace, settings) -> int:
        """
        Run the command.

        Returns:
            int: Exit code

        Raises:
            NotImplementedError: If not implemented by subclass
        """
        raise NotImplementedError("Command must implement execute method")

    def report(self, data: Any, args: argparse.Namespace) -> int:
        emit(data, getattr(args, 'format', 'text'))
        return EXIT_OK


def add_geometry(parser: argparse.ArgumentParser, *flags: str, required: bool = True) -> None:
    """Add integer geometry flags such as --alpha, --m or --kappa."""
    for flag in flags:
        parser.add_argument(f'--{flag}', type=int, required=required, help=f"Geometry parameter {flag}")


def add_seed(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--seed', type=int, default=None,
                        help="Random seed (default: MOLE_SEED, else 0)")


def add_padding(parser: argparse.ArgumentParser, default: str = 'valid') -> None:
    parser.add_argument('--padding', default=default, help=f"valid or same (default: {default})")


def check_positive(args: argparse.Namespace, *fields: str) -> None:
    """Validate that every named (non-None) attribute is a positive integer."""
    for field in fields:
        value = getattr(args, field, None)
        if value is not None:
            GeometryValidator.validate_positive_int(value, field)


def check_core_size(q: int, settings) -> None:
    """
    Raises:
        ValidationError: If the core side exceeds MOLE_MAX_CORE
    """
    if q > settings.MAX_CORE:
        raise ValidationError(
            f"Core side q={q} exceeds MOLE_MAX_CORE={settings.MAX_CORE}",
            details={'q': q, 'max_core': settings.MAX_CORE}
        )


def feature_side(m: int, p: int, padding: str) -> int:
    return output_side(m, p, GeometryValidator.validate_padding(padding))


def ordered_map(func: Callable, items: Iterable, workers: int) -> List:
    """Map over items with a thread pool; results keep the input order."""
    items = list(items)
    if not items:
        return []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(func, items))


def resolve_seed(args: argparse.Namespace, settings) -> int:
    flag: Optional[int] = getattr(args, 'seed', None)
    if flag is not None:
        GeometryValidator.validate_seed(flag)
    return settings.resolve_seed(flag)
