"""
path: core/commands/morph.py
purpose: Implements the morph command that turns images into morphed rows
critical:
- Every input must match the secret's geometry; the failing item index is reported
- Output order equals input order regardless of thread scheduling
"""

import numpy as np

from core.command_registry import registry
from core.error_handler import GeometryMismatch
from core.file_formats import read_image_or_tensor, write_pairs, write_rows
from modules.d2r.tensors import ImageTensor
from modules.morphing.core import morph_batch
from modules.morphing.secret_store import load_secret

from .base import PROVIDER, BaseCommand, ordered_map


class MorphCommand(BaseCommand):
    """Morph a batch of images with the secret core."""

    def __init__(self):
        super().__init__(
            name="morph",
            description="Morph images into a MOLEROW1 dataset file",
            persona=PROVIDER,
            reads_secret=True,
        )

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument('--secret', required=True, help="Secret JSON path")
        parser.add_argument('--images', nargs='*', default=[], help="PGM/PPM images or MOLETEN1 tensors")
        parser.add_argument('--out', required=True, help="Morphed rows output path")
        parser.add_argument('--pairs-out', default=None, help="Also write original/morphed pairs here")

    def execute(self, args, settings) -> int:
        secret = load_secret(args.secret)
        width = secret.core.width

        def load(item):
            index, path = item
            image = ImageTensor.from_array(read_image_or_tensor(path))
            if (image.alpha, image.m) != (secret.alpha, secret.m):
                raise GeometryMismatch(
                    f"Item {index} ({path}) is {image.alpha}x{image.m}x{image.m}, "
                    f"the secret expects {secret.alpha}x{secret.m}x{secret.m}",
                    details={'item': index}
                )
            return image.data.reshape(-1)

        rows = ordered_map(load, enumerate(args.images), settings.WORKERS)
        originals = np.stack(rows) if rows else np.zeros((0, width))
        morphed = morph_batch(originals, secret.core)
        write_rows(args.out, morphed, width)
        if args.pairs_out:
            write_pairs(args.pairs_out, originals, morphed)
        return self.report({'count': len(rows), 'width': width, 'out': str(args.out)}, args)


registry.register_command(MorphCommand())
