"""
path: modules/attacks/report.py
purpose: Builds the JSON attack reports the developer-side CLI prints
critical:
- A verdict describes the attack's outcome; it never alters the exit code
- Reports carry geometry and statistics only, never core entries or orders
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

from core.linalg import Matrix, SeededRng

from .bounds import augconv_reverse_analysis, bf_bound_M, bf_bound_rand, lemma1_bound, required_pairs
from .montecarlo import binomial_se, cap_fraction_exact, lemma1_montecarlo, lemma2_check
from .recovery import Pair, dtpair_residual

logger = logging.getLogger(__name__)

NEGLIGIBLE_LOG2 = -64.0
DTPAIR_TOLERANCE = 1e-6
LEMMA2_TOLERANCE = 0.1
SE_MARGIN = 3.0


@dataclass
class AttackReport:
    """
    Result of one attack simulation.

    Attributes:
        attack (str): bruteforce, reverse, dtpair, lemma1 or lemma2
        geometry (dict): Parameters the attack ran with
        verdict (str): Short outcome label
        sigma (float): Privacy reservation, when the attack uses one
        log2_prob (dict): Named log2 probabilities
        empirical (float): Measured quantity, when simulated
        trials (int): Simulation size or pair count
        analysis (dict): Attack-specific extras
    """

    attack: str
    geometry: Dict[str, Any]
    verdict: str
    sigma: Optional[float] = None
    log2_prob: Dict[str, float] = field(default_factory=dict)
    empirical: Optional[float] = None
    trials: Optional[int] = None
    analysis: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            'attack': self.attack,
            'geometry': dict(self.geometry),
            'sigma': self.sigma,
            'log2_prob': dict(self.log2_prob),
            'empirical': self.empirical,
            'trials': self.trials,
            'verdict': self.verdict,
            'analysis': dict(self.analysis),
        }


def bruteforce_report(alpha: int, m: int, kappa: int, sigma: float, beta: int) -> AttackReport:
    """Brute-force guessing of the core and of the channel order."""
    p_core = bf_bound_M(sigma, alpha, m, kappa)
    p_order = bf_bound_rand(beta)
    worst = max(p_core, p_order)
    return AttackReport(
        attack='bruteforce',
        geometry={'alpha': alpha, 'm': m, 'kappa': kappa, 'beta': beta, 'q': alpha * m * m // kappa},
        sigma=sigma,
        log2_prob={'p_m_bf': p_core.log2_value, 'p_r_bf': p_order.log2_value},
        verdict='negligible' if worst.log2_value <= NEGLIGIBLE_LOG2 else 'non-negligible',
        analysis={
            'p_m_bf': p_core.scientific(),
            'p_r_bf': p_order.scientific(),
            'p_r_bf_linear': p_order.linear(),
        },
    )


def reverse_report(alpha: int, m: int, n: int, p: int, kappa: int, sigma: float = 0.5) -> AttackReport:
    """Reverse analysis of the Aug-Conv matrix."""
    result = augconv_reverse_analysis(alpha, m, n, p, kappa, sigma)
    return AttackReport(
        attack='reverse',
        geometry={'alpha': alpha, 'm': m, 'n': n, 'p': p, 'kappa': kappa},
        sigma=sigma,
        log2_prob={'p_m_ar': result.log2_p_ar.log2_value},
        verdict='insecure-kappa' if result.solvable else 'underdetermined',
        analysis={
            'n_unknowns': result.n_unknowns,
            'n_equations': result.n_equations,
            'kappa_max': result.kappa_max,
            'solvable': result.solvable,
            'overdetermined': result.overdetermined,
        },
    )


def dtpair_report(pairs: Sequence[Pair], recovered: Matrix, q: int, kappa: int, mode: str) -> AttackReport:
    """Summarize a finished D-T pair attack by its residual over every pair."""
    residual = dtpair_residual(pairs, recovered, kappa)
    return AttackReport(
        attack='dtpair',
        geometry={'q': q, 'kappa': kappa},
        empirical=residual,
        trials=len(pairs),
        verdict='recovered' if residual <= DTPAIR_TOLERANCE else 'not-recovered',
        analysis={'mode': mode, 'required_pairs': required_pairs(q, kappa, mode)},
    )


def lemma1_report(n_dims: int, d: float, trials: int, rng: SeededRng, workers: int = 1) -> AttackReport:
    """Monte-Carlo cap probability against the closed-form bound."""
    bound = lemma1_bound(n_dims, d)
    fraction = lemma1_montecarlo(n_dims, d, trials, rng, workers)
    se = binomial_se(fraction, trials)
    ceiling = bound.linear() + SE_MARGIN * se
    return AttackReport(
        attack='lemma1',
        geometry={'N': n_dims, 'd': d},
        log2_prob={'bound': bound.log2_value},
        empirical=fraction,
        trials=trials,
        verdict='within-bound' if fraction <= ceiling else 'exceeds-bound',
        analysis={'exact_cap': cap_fraction_exact(n_dims, d), 'standard_error': se},
    )


def lemma2_report(n_prime: int, trials: int, rng: SeededRng) -> AttackReport:
    """SSE expectation identity residual."""
    residual = lemma2_check(n_prime, trials, rng)
    return AttackReport(
        attack='lemma2',
        geometry={'N_prime': n_prime},
        empirical=residual,
        trials=trials,
        verdict='consistent' if residual <= LEMMA2_TOLERANCE else 'inconsistent',
    )
