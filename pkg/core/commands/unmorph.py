"""
path: core/commands/unmorph.py
purpose: Implements the provider-side unmorph command used for debugging
"""

from core.command_registry import registry
from core.file_formats import read_rows, write_image, write_rows
from modules.morphing.core import unmorph_batch
from modules.morphing.secret_store import load_secret

from .base import PROVIDER, BaseCommand


class UnmorphCommand(BaseCommand):
    """Restore morphed rows with M′⁻¹."""

    def __init__(self):
        super().__init__(
            name="unmorph",
            description="Restore morphed rows with the secret (provider debugging)",
            persona=PROVIDER,
            reads_secret=True,
        )

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument('--secret', required=True, help="Secret JSON path")
        parser.add_argument('--rows', required=True, help="MOLEROW1 morphed rows")
        parser.add_argument('--out', required=True, help="Restored rows output path")
        parser.add_argument('--image-prefix', default=None,
                            help="Also write each restored row as <prefix><index>.ppm/.pgm")

    def execute(self, args, settings) -> int:
        secret = load_secret(args.secret)
        restored = unmorph_batch(read_rows(args.rows), secret.core)
        write_rows(args.out, restored, secret.core.width)
        if args.image_prefix:
            suffix = '.pgm' if secret.alpha == 1 else '.ppm'
            for index, row in enumerate(restored):
                write_image(f"{args.image_prefix}{index}{suffix}", row.reshape(secret.alpha, secret.m, secret.m))
        return self.report({'count': int(restored.shape[0]), 'out': str(args.out)}, args)


registry.register_command(UnmorphCommand())
