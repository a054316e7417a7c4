"""
path: core/commands/conv_matrix.py
purpose: Implements conv-matrix, lowering a kernel file to the plain d2r matrix C
"""

from core.command_registry import registry
from core.file_formats import read_kernels, write_matrix
from modules.d2r.lowering import build_conv_matrix
from modules.d2r.tensors import KernelSet

from .base import DEVELOPER, BaseCommand, add_geometry, add_padding, check_positive


class ConvMatrixCommand(BaseCommand):
    """Write C for a kernel set and an input side m."""

    def __init__(self):
        super().__init__(
            name="conv-matrix",
            description="Lower a kernel file to its d2r convolution matrix (MOLEMAT1)",
            persona=DEVELOPER,
        )

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument('--kernels', required=True, help="MOLEKER1 kernel file")
        add_geometry(parser, 'm')
        add_padding(parser)
        parser.add_argument('--out', required=True, help="Matrix output path")

    def pre_execute(self, args, settings) -> None:
        check_positive(args, 'm')

    def execute(self, args, settings) -> int:
        kernels = KernelSet.from_array(read_kernels(args.kernels))
        c = build_conv_matrix(kernels, args.m, args.padding)
        write_matrix(args.out, c.matrix)
        return self.report({
            'alpha': c.alpha, 'm': c.m, 'beta': c.beta, 'n': c.n, 'p': c.p,
            'padding': c.padding.value, 'out': str(args.out),
        }, args)


registry.register_command(ConvMatrixCommand())
