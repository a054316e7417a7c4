"""
path: core/commands/analyze.py
purpose: Implements the analyze command family (overhead, ssim, sweep, privacy, parity)
critical:
- Sweeps stream any core larger than MOLE_MAX_CORE instead of allocating it;
  the privacy demo needs the inverse and still rejects such cores
"""

from core.command_registry import registry
from core.file_formats import read_image_or_tensor
from core.linalg import SeededRng
from core.validation import GeometryValidator
from modules.d2r.tensors import ImageTensor
from modules.metrics.overhead import overhead_report
from modules.metrics.privacy import mean_privacy_sweep
from modules.metrics.reservation import reservation_recovery_demo
from modules.metrics.ssim import SsimParams, ssim
from modules.morphing.core import choose_q
from modules.toytrain.experiment import default_task, parity_experiment
from utils.helpers import to_jsonable, write_csv

from .base import (
    DEVELOPER,
    BaseCommand,
    add_geometry,
    add_padding,
    add_seed,
    check_core_size,
    check_positive,
    feature_side,
    resolve_seed,
)


def _image(path: str) -> ImageTensor:
    return ImageTensor.from_array(read_image_or_tensor(path))


class AnalyzeCommand(BaseCommand):
    """Overhead, privacy and toy-training analyses."""

    def __init__(self):
        super().__init__(
            name="analyze",
            description="Overhead report, SSIM, privacy sweep, reservation demo or parity run",
            persona=DEVELOPER,
        )

    def add_arguments(self, parser) -> None:
        kinds = parser.add_subparsers(dest='kind', metavar='KIND')
        kinds.required = True

        overhead = kinds.add_parser('overhead', help="Provider, developer and data overheads")
        BaseCommand.add_arguments(self, overhead)
        add_geometry(overhead, 'alpha', 'm', 'p', 'beta', 'kappa')
        add_padding(overhead, default='same')
        overhead.add_argument('--base-macs', type=int, default=None, help="Baseline MACs for a ratio")
        overhead.add_argument('--dataset-elems', type=int, default=None, help="Dataset elements for a ratio")

        compare = kinds.add_parser('ssim', help="SSIM between two images")
        BaseCommand.add_arguments(self, compare)
        compare.add_argument('--a', required=True)
        compare.add_argument('--b', required=True)
        self._ssim_flags(compare)

        sweep = kinds.add_parser('sweep', help="SSIM of morphed images per κ")
        BaseCommand.add_arguments(self, sweep)
        sweep.add_argument('--image', nargs='+', required=True, help="One or more images (results averaged)")
        sweep.add_argument('--kappas', required=True, help="Comma-separated κ list")
        sweep.add_argument('--csv', default=None, help="Also write the table as CSV")
        add_seed(sweep)
        self._ssim_flags(sweep)

        privacy = kinds.add_parser('privacy', help="Recovery quality against the privacy reservation")
        BaseCommand.add_arguments(self, privacy)
        privacy.add_argument('--image', required=True)
        privacy.add_argument('--sigmas', default='0.01,0.1,0.5,0.9', help="Comma-separated σ list")
        privacy.add_argument('--kappa', type=int, required=True)
        add_seed(privacy)
        self._ssim_flags(privacy)

        parity = kinds.add_parser('parity', help="Toy accuracy parity with and without Aug-Conv")
        BaseCommand.add_arguments(self, parity)
        add_seed(parity)

    @staticmethod
    def _ssim_flags(parser) -> None:
        parser.add_argument('--window', type=int, default=None, help="SSIM window (default: MOLE_SSIM_WINDOW)")
        parser.add_argument('--dynamic-range', type=float, default=1.0)

    def pre_execute(self, args, settings) -> None:
        check_positive(args, 'alpha', 'm', 'p', 'beta', 'kappa', 'base_macs', 'dataset_elems')
        if hasattr(args, 'window'):
            args.params = SsimParams(args.window or settings.SSIM_WINDOW, args.dynamic_range)
        if args.kind == 'sweep':
            args.kappa_list = GeometryValidator.parse_int_list(args.kappas, 'kappas')
        if args.kind == 'privacy':
            args.sigma_list = [GeometryValidator.validate_open_unit(s)
                               for s in GeometryValidator.parse_float_list(args.sigmas, 'sigmas')]

    def execute(self, args, settings) -> int:
        handler = getattr(self, f"_{args.kind}")
        return self.report(handler(args, settings), args)

    def _overhead(self, args, settings):
        n = feature_side(args.m, args.p, args.padding)
        return overhead_report(args.alpha, args.m, args.p, args.beta, n, args.kappa,
                               args.base_macs, args.dataset_elems)

    def _ssim(self, args, settings):
        return {'ssim': ssim(_image(args.a), _image(args.b), args.params)}

    def _sweep(self, args, settings):
        images = [_image(path) for path in args.image]
        rng = SeededRng(resolve_seed(args, settings))
        rows = mean_privacy_sweep(images, args.kappa_list, rng, args.params, settings.COND_MAX,
                                  max_dense=settings.MAX_CORE)
        if args.csv:
            write_csv(args.csv, to_jsonable(rows))
        return rows

    def _privacy(self, args, settings):
        image = _image(args.image)
        check_core_size(choose_q(image.alpha, image.m, args.kappa).q, settings)
        rng = SeededRng(resolve_seed(args, settings))
        return reservation_recovery_demo(image, args.sigma_list, args.kappa, rng, args.params, settings.COND_MAX)

    def _parity(self, args, settings):
        task = default_task(resolve_seed(args, settings))
        return parity_experiment(task.dataset, task.kernels, task.core, task.perm, task.config)


registry.register_command(AnalyzeCommand())
