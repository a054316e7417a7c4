"""
Attacks feature module

Closed-form log-domain bounds, Monte-Carlo validation and simulated
recovery attacks against morphed data.
"""

from modules.attacks.logprob import LogProb
from modules.attacks.bounds import (
    HbcSummary,
    ReverseAnalysis,
    augconv_reverse_analysis,
    bf_bound_M,
    bf_bound_rand,
    hbc_summary,
    lemma1_bound,
    required_pairs,
)
from modules.attacks.montecarlo import (
    Lemma2Result,
    binomial_se,
    cap_fraction_exact,
    lemma1_montecarlo,
    lemma2_check,
    lemma2_residual,
    log2_sphere_area,
)
from modules.attacks.recovery import (
    RecoveryReport,
    brute_force_recover,
    brute_force_success_rate,
    dt_pair_attack,
    dtpair_residual,
    make_pairs,
    relative_max_error,
    stack_pairs,
)
from modules.attacks.report import (
    AttackReport,
    bruteforce_report,
    dtpair_report,
    lemma1_report,
    lemma2_report,
    reverse_report,
)

__all__ = [
    'AttackReport', 'HbcSummary', 'Lemma2Result', 'LogProb', 'RecoveryReport',
    'ReverseAnalysis', 'augconv_reverse_analysis', 'bf_bound_M', 'bf_bound_rand',
    'binomial_se', 'brute_force_recover', 'brute_force_success_rate',
    'bruteforce_report', 'cap_fraction_exact', 'dt_pair_attack', 'dtpair_report',
    'dtpair_residual', 'hbc_summary', 'lemma1_bound', 'lemma1_montecarlo',
    'lemma1_report', 'lemma2_check', 'lemma2_report', 'lemma2_residual',
    'log2_sphere_area', 'make_pairs', 'relative_max_error', 'required_pairs',
    'reverse_report', 'stack_pairs',
]
