"""
Closed-Form Attack Bounds

This module evaluates the success-probability bounds of the three attacks
on a morphed dataset in the honest-but-curious setting, all in log2 space.

The bounds are responsible for:
1. Brute-force guessing of the core (hypersphere cap bound)
2. Brute-force guessing of the channel order (1/β!)
3. Aug-Conv reverse analysis (unknown/equation counting, κ upper bound)
4. D-T pair counts needed by the known-pair attack

Critical:
- Nothing here is ever converted to linear space below 2^−1000
- d > 1 is outside the cap bound's domain and raises DomainError
"""

import logging
import math
from dataclasses import dataclass

from scipy.special import gammaln

from core.error_handler import DomainError, ValidationError
from core.validation import GeometryValidator
from modules.morphing.core import choose_q

from .logprob import LogProb

logger = logging.getLogger(__name__)

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ReverseAnalysis:
    """
    Counting argument for recovering M′ from C^ac and C's structure.

    Attributes:
        n_unknowns (int): αm²/κ + αp²
        n_equations (int): n²
        kappa_max (int): ⌊αm²/n²⌋
        log2_p_ar (LogProb): Success bound at the caller's σ
        solvable (bool): κ exceeds kappa_max (the configuration is insecure)
        overdetermined (bool): n_equations >= n_unknowns
    """

    n_unknowns: int
    n_equations: int
    kappa_max: int
    log2_p_ar: LogProb
    solvable: bool
    overdetermined: bool


@dataclass(frozen=True)
class HbcSummary:
    """Bounds of the three honest-but-curious attacks and their maximum."""

    p_m_bf: LogProb
    p_r_bf: LogProb
    p_m_ar: LogProb

    @property
    def upper(self) -> LogProb:
        return max(self.p_m_bf, self.p_r_bf, self.p_m_ar)


def lemma1_bound(n_dims: int, d: float) -> LogProb:
    """
    Upper bound on the chance that two uniform points of the unit
    (N−1)-sphere lie within distance d: ½·d^(N−1).

    Raises:
        ValidationError: If N < 2
        DomainError: If d is not in (0, 1]
    """
    if n_dims < 2:
        raise ValidationError(f"N must be >= 2, got {n_dims}")
    if not 0.0 < d <= 1.0:
        raise DomainError(f"distance d must satisfy 0 < d <= 1, got {d}")
    return LogProb(-1.0 + (n_dims - 1) * math.log2(d))


def bf_bound_M(sigma: float, alpha: int, m: int, kappa: int) -> LogProb:
    """
    Brute-force bound on guessing the core: ½·σ^(N−1) with N = q².

    Raises:
        ValidationError: If σ is not in (0, 1)
        NonDivisible: If κ does not divide αm²
    """
    sigma = GeometryValidator.validate_open_unit(sigma)
    q = choose_q(alpha, m, kappa).q
    n_elements = q * q
    return LogProb(-1.0 + (n_elements - 1) * math.log2(sigma))


def bf_bound_rand(beta: int) -> LogProb:
    """Chance of guessing the channel order outright: 1/β!."""
    if beta < 1:
        raise ValidationError(f"beta must be >= 1, got {beta}")
    return LogProb(-float(gammaln(beta + 1)) / _LN2)


def augconv_reverse_analysis(alpha: int, m: int, n: int, p: int, kappa: int,
                             sigma: float = 0.5) -> ReverseAnalysis:
    """
    Count unknowns and equations of the reverse analysis of C^ac.

    The success bound is ½·σ^((q − n²)·q + αp² − 1), capped at probability 1
    when the exponent is not positive.

    Raises:
        ValidationError: On non-positive geometry or σ outside (0, 1)
        NonDivisible: If κ does not divide αm²
    """
    for name, value in (('alpha', alpha), ('m', m), ('n', n), ('p', p)):
        GeometryValidator.validate_positive_int(value, name)
    sigma = GeometryValidator.validate_open_unit(sigma)
    q = choose_q(alpha, m, kappa).q
    total = alpha * m * m

    n_unknowns = q + alpha * p * p
    n_equations = n * n
    kappa_max = total // n_equations
    exponent = (q - n_equations) * q + alpha * p * p - 1
    log2_p = min(0.0, -1.0 + exponent * math.log2(sigma))
    solvable = kappa * n_equations > total

    if solvable:
        logger.warning("Reverse analysis: configuration is solvable",
                       extra={'details': {'kappa': kappa, 'kappa_max': kappa_max}})
    return ReverseAnalysis(
        n_unknowns=n_unknowns,
        n_equations=n_equations,
        kappa_max=kappa_max,
        log2_p_ar=LogProb(log2_p),
        solvable=solvable,
        overdetermined=n_equations >= n_unknowns,
    )


def hbc_summary(sigma: float, alpha: int, m: int, kappa: int, beta: int, n: int, p: int) -> HbcSummary:
    """The three attack bounds; the adversary's upper boundary is the largest."""
    return HbcSummary(
        p_m_bf=bf_bound_M(sigma, alpha, m, kappa),
        p_r_bf=bf_bound_rand(beta),
        p_m_ar=augconv_reverse_analysis(alpha, m, n, p, kappa, sigma).log2_p_ar,
    )


def required_pairs(q: int, kappa: int, mode: str = 'strict') -> int:
    """
    D-T pairs needed to stack an invertible q×q system.

    'strict' uses one q-segment per pair (q pairs); 'segment' uses all κ
    segments of every pair (⌈q/κ⌉ pairs).
    """
    if q < 1 or kappa < 1:
        raise ValidationError("q and kappa must be positive")
    if mode == 'strict':
        return q
    if mode == 'segment':
        return -(-q // kappa)
    raise ValidationError(f"Unknown pair mode {mode!r}; use 'strict' or 'segment'")
