"""
path: core/commands/attack.py
purpose: Implements the attack command family (bruteforce, reverse, dtpair, lemma1, lemma2)
critical:
- Exit code 0 whatever the verdict; outcomes live in the report
- Never reads the secret; dtpair works from a pair file only
"""

from core.command_registry import registry
from core.error_handler import NonDivisible, ValidationError
from core.file_formats import read_matrix, read_pairs, write_matrix
from core.linalg import RowVector, SeededRng
from core.validation import GeometryValidator
from modules.attacks.recovery import dt_pair_attack, relative_max_error
from modules.attacks.report import (
    bruteforce_report,
    dtpair_report,
    lemma1_report,
    lemma2_report,
    reverse_report,
)

from .base import DEVELOPER, BaseCommand, add_geometry, add_padding, add_seed, check_positive, feature_side, resolve_seed

KINDS = ('bruteforce', 'reverse', 'dtpair', 'lemma1', 'lemma2')


class AttackCommand(BaseCommand):
    """Simulate or bound one of the attacks on morphed data."""

    def __init__(self):
        super().__init__(
            name="attack",
            description="Evaluate an attack: bounds, Monte-Carlo checks or a D-T pair solve",
            persona=DEVELOPER,
        )

    def add_arguments(self, parser) -> None:
        kinds = parser.add_subparsers(dest='kind', metavar='KIND')
        kinds.required = True

        brute = kinds.add_parser('bruteforce', help="Brute-force bounds on the core and channel order")
        BaseCommand.add_arguments(self, brute)
        add_geometry(brute, 'alpha', 'm', 'kappa', 'beta')
        brute.add_argument('--sigma', type=float, default=0.5, help="Privacy reservation σ in (0, 1)")

        reverse = kinds.add_parser('reverse', help="Reverse analysis of the Aug-Conv layer")
        BaseCommand.add_arguments(self, reverse)
        add_geometry(reverse, 'alpha', 'm', 'p', 'kappa')
        add_padding(reverse, default='same')
        reverse.add_argument('--sigma', type=float, default=0.5, help="Privacy reservation σ in (0, 1)")

        dtpair = kinds.add_parser('dtpair', help="Recover M′ from known original/morphed pairs")
        BaseCommand.add_arguments(self, dtpair)
        dtpair.add_argument('--pairs', required=True, help="MOLEPAR1 pair file")
        dtpair.add_argument('--kappa', type=int, default=1, help="Block count κ (default: 1)")
        dtpair.add_argument('--mode', choices=('strict', 'segment'), default='strict')
        dtpair.add_argument('--out', default=None, help="Write the recovered core here")
        dtpair.add_argument('--truth', default=None, help="Known core, to report the max relative error")

        lemma1 = kinds.add_parser('lemma1', help="Monte-Carlo check of the hypersphere cap bound")
        BaseCommand.add_arguments(self, lemma1)
        lemma1.add_argument('--n-dims', type=int, required=True, help="Dimension N in [2, 16]")
        lemma1.add_argument('--d', type=float, required=True, help="Distance in (0, 1]")
        lemma1.add_argument('--trials', type=int, default=100_000)
        add_seed(lemma1)

        lemma2 = kinds.add_parser('lemma2', help="Monte-Carlo check of the SSE expectation identity")
        BaseCommand.add_arguments(self, lemma2)
        lemma2.add_argument('--n-prime', type=int, required=True, help="Dimension N′ in [4, 64]")
        lemma2.add_argument('--trials', type=int, default=100_000)
        add_seed(lemma2)

    def pre_execute(self, args, settings) -> None:
        check_positive(args, 'alpha', 'm', 'kappa', 'beta', 'p', 'trials')
        if getattr(args, 'sigma', None) is not None:
            args.sigma = GeometryValidator.validate_open_unit(args.sigma)

    def execute(self, args, settings) -> int:
        if args.kind == 'bruteforce':
            report = bruteforce_report(args.alpha, args.m, args.kappa, args.sigma, args.beta)
        elif args.kind == 'reverse':
            n = feature_side(args.m, args.p, args.padding)
            report = reverse_report(args.alpha, args.m, n, args.p, args.kappa, args.sigma)
        elif args.kind == 'dtpair':
            report = self._dtpair(args)
        elif args.kind == 'lemma1':
            rng = SeededRng(resolve_seed(args, settings))
            report = lemma1_report(args.n_dims, args.d, args.trials, rng, settings.WORKERS)
        else:
            rng = SeededRng(resolve_seed(args, settings))
            report = lemma2_report(args.n_prime, args.trials, rng)
        return self.report(report, args)

    def _dtpair(self, args):
        originals, morphed = read_pairs(args.pairs)
        width = originals.shape[1]
        if width % args.kappa:
            raise NonDivisible(f"kappa={args.kappa} does not divide the pair width {width}")
        q = width // args.kappa
        pairs = [(RowVector(d), RowVector(t)) for d, t in zip(originals, morphed)]
        recovered = dt_pair_attack(pairs, q, args.kappa, args.mode)
        report = dtpair_report(pairs, recovered, q, args.kappa, args.mode)
        if args.out:
            write_matrix(args.out, recovered)
            report.analysis['out'] = str(args.out)
        if args.truth:
            truth = read_matrix(args.truth)
            if truth.shape != recovered.shape:
                raise ValidationError(f"Truth core is {truth.rows}x{truth.cols}, recovered is {q}x{q}")
            report.analysis['max_relative_error'] = relative_max_error(recovered, truth)
        return report


registry.register_command(AttackCommand())
