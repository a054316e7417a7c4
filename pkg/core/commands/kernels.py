"""
path: core/commands/kernels.py
purpose: Implements the kernels command, a stand-in for a pre-trained first layer
"""

from core.command_registry import registry
from core.file_formats import write_kernels
from core.linalg import SeededRng
from modules.d2r.lowering import random_kernels
from modules.toytrain.dataset import box_kernels

from .base import DEVELOPER, BaseCommand, add_geometry, add_seed, check_positive, resolve_seed


class KernelsCommand(BaseCommand):
    """Write a random α×β×p×p kernel set."""

    def __init__(self):
        super().__init__(
            name="kernels",
            description="Write a random first-layer kernel set (MOLEKER1)",
            persona=DEVELOPER,
        )

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        add_geometry(parser, 'alpha', 'beta', 'p')
        add_seed(parser)
        parser.add_argument('--box', action='store_true', help="Scaled box filters instead of N(0,1)/p weights")
        parser.add_argument('--out', required=True, help="Kernel output path")

    def pre_execute(self, args, settings) -> None:
        check_positive(args, 'alpha', 'beta', 'p')

    def execute(self, args, settings) -> int:
        rng = SeededRng(resolve_seed(args, settings))
        make = box_kernels if args.box else random_kernels
        kernels = make(args.alpha, args.beta, args.p, rng)
        write_kernels(args.out, kernels.weights)
        return self.report({'alpha': args.alpha, 'beta': args.beta, 'p': args.p, 'out': str(args.out)}, args)


registry.register_command(KernelsCommand())
