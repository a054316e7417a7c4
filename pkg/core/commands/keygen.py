"""
path: core/commands/keygen.py
purpose: Implements the keygen command that creates the provider's secret
critical:
- κ must divide αm² and the core must fit MOLE_MAX_CORE
- The report never contains the seed or any core entry
"""

from core.command_registry import registry
from core.linalg import SeededRng
from modules.augconv.layer import ChannelPermutation, random_permutation
from modules.morphing.core import choose_q, generate_core, identity_core
from modules.morphing.secret_store import MorphSecret, save_secret

from .base import (
    PROVIDER,
    BaseCommand,
    add_geometry,
    add_padding,
    add_seed,
    check_core_size,
    check_positive,
    feature_side,
    resolve_seed,
)


class KeygenCommand(BaseCommand):
    """Generate the morphing core M′ (and optionally the channel order)."""

    def __init__(self):
        super().__init__(
            name="keygen",
            description="Generate a secret morphing core and write the secret files",
            persona=PROVIDER,
            reads_secret=True,
        )

    def add_arguments(self, parser) -> None:
        super().add_arguments(parser)
        add_geometry(parser, 'alpha', 'm', 'kappa')
        add_geometry(parser, 'p', 'beta', required=False)
        add_padding(parser)
        add_seed(parser)
        parser.add_argument('--identity', action='store_true', help="Use M′ = I and, with --beta, the identity channel order (debugging only)")
        parser.add_argument('--out', required=True, help="Secret JSON path")

    def pre_execute(self, args, settings) -> None:
        check_positive(args, 'alpha', 'm', 'kappa', 'p', 'beta')
        n = feature_side(args.m, args.p, args.padding) if args.p else None
        args.choice = choose_q(args.alpha, args.m, args.kappa, n)
        check_core_size(args.choice.q, settings)

    def execute(self, args, settings) -> int:
        q = args.choice.q
        seed = resolve_seed(args, settings)
        key_rng, perm_rng = SeededRng(seed).spawn(2)
        if args.identity:
            core = identity_core(q, args.kappa)
        else:
            core = generate_core(q, args.kappa, key_rng, settings.COND_MAX)
        permutation = None
        if args.beta and args.identity:
            permutation = ChannelPermutation.identity(args.beta).order
        elif args.beta:
            permutation = random_permutation(args.beta, perm_rng).order
        secret = MorphSecret(core, seed, args.alpha, args.m, permutation)
        mprime_path = save_secret(args.out, secret)

        if args.choice.kappa_max is None:
            verdict = 'unchecked'
        else:
            verdict = 'insecure' if args.choice.bound_violated else 'secure'
        return self.report({
            'alpha': args.alpha,
            'm': args.m,
            'kappa': args.kappa,
            'q': q,
            'kappa_max': args.choice.kappa_max,
            'security': verdict,
            'secret': str(args.out),
            'core_file': str(mprime_path),
        }, args)


registry.register_command(KeygenCommand())
