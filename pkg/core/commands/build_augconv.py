"""
path: core/commands/build_augconv.py
purpose: Implements build-augconv, folding the secret into the developer's first layer
critical:
- The sidecar written next to the layer holds geometry only
- A permutation is drawn from the secret seed once and then kept in the secret
"""

from core.command_registry import registry
from core.error_handler import GeometryMismatch
from core.file_formats import read_kernels
from core.linalg import SeededRng
from modules.augconv.layer import ChannelPermutation, build_augconv, random_permutation
from modules.augconv.sidecar import save_augconv
from modules.d2r.lowering import build_conv_matrix
from modules.d2r.tensors import KernelSet
from modules.morphing.secret_store import load_secret, save_secret

from .base import PROVIDER, BaseCommand, add_padding


class BuildAugconvCommand(BaseCommand):
    """Build C^ac = M⁻¹·C with shuffled channel groups."""

    def __init__(self):
        super().__init__(
            name="build-augconv",
            description="Build the Aug-Conv layer from the secret and a kernel file",
            persona=PROVIDER,
            reads_secret=True,
        )

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument('--secret', required=True, help="Secret JSON path")
        parser.add_argument('--kernels', required=True, help="MOLEKER1 kernel file")
        add_padding(parser)
        parser.add_argument('--out', required=True, help="Aug-Conv matrix output path")

    def execute(self, args, settings) -> int:
        secret = load_secret(args.secret)
        kernels = KernelSet.from_array(read_kernels(args.kernels))
        if kernels.alpha != secret.alpha:
            raise GeometryMismatch(
                f"Kernels expect {kernels.alpha} input channels, the secret covers {secret.alpha}"
            )
        c = build_conv_matrix(kernels, secret.m, args.padding)

        if secret.permutation is None:
            perm = random_permutation(kernels.beta, SeededRng(secret.seed).spawn(2)[1])
            save_secret(args.secret, secret.with_permutation(list(perm.order)))
        else:
            perm = ChannelPermutation(len(secret.permutation), secret.permutation)
            if perm.beta != kernels.beta:
                raise GeometryMismatch(
                    f"Secret permutation covers {perm.beta} channels, the kernels have {kernels.beta}"
                )

        ac = build_augconv(secret.core, c, perm)
        sidecar = save_augconv(args.out, ac)
        return self.report({**ac.geometry(), 'out': str(args.out), 'sidecar': str(sidecar)}, args)


registry.register_command(BuildAugconvCommand())
