"""
path: core/commands/apply.py
purpose: Implements apply, extracting features from morphed rows with the Aug-Conv layer
critical:
- Needs only the layer and its sidecar; the secret is never opened
- Feature order equals row order
"""

import numpy as np

from core.command_registry import registry
from core.file_formats import read_rows, write_tensors
from modules.augconv.layer import apply_augconv_batch
from modules.augconv.sidecar import load_augconv

from .base import DEVELOPER, BaseCommand, ordered_map


class ApplyCommand(BaseCommand):
    """Run T^r·C^ac over a morphed dataset."""

    def __init__(self):
        super().__init__(
            name="apply",
            description="Extract features from morphed rows with an Aug-Conv layer (MOLETEN1)",
            persona=DEVELOPER,
        )

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        parser.add_argument('--augconv', required=True, help="Aug-Conv matrix path (sidecar next to it)")
        parser.add_argument('--rows', required=True, help="MOLEROW1 morphed rows")
        parser.add_argument('--out', required=True, help="Feature output path")

    def execute(self, args, settings) -> int:
        ac = load_augconv(args.augconv)
        rows = read_rows(args.rows)
        chunks = np.array_split(rows, settings.WORKERS) if rows.shape[0] else []
        features = [
            f for batch in ordered_map(lambda chunk: apply_augconv_batch(chunk, ac), chunks, settings.WORKERS)
            for f in batch
        ]
        write_tensors(args.out, [f.data for f in features])
        return self.report({'count': len(features), 'beta': ac.beta, 'n': ac.n, 'out': str(args.out)}, args)


registry.register_command(ApplyCommand())
