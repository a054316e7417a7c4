"""
Recovery Attacks

This module simulates the adversary's two direct recovery routes.

The attacks are responsible for:
1. Brute force: invert a guessed G ≈ M and score the recovery against the
   privacy reservation threshold σ/N^(1/4)
2. D-T pair attack: stack known (original, morphed) segments and solve
   𝔻·M′ = 𝕋 for the core

Critical:
- Pair stacking has two modes: 'strict' takes one q-segment per pair,
  'segment' takes every κ segment of each pair
- A numerically singular stack raises RankDeficient, not SingularMatrix
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from core.error_handler import (
    GeometryMismatch,
    InsufficientPairs,
    LengthMismatch,
    RankDeficient,
    SingularMatrix,
    ValidationError,
)
from core.linalg import Matrix, RowVector, SeededRng, accumulate_product, invert, lu_factor_checked
from core.validation import GeometryValidator
from modules.metrics.privacy import erms, reservation_threshold
from modules.morphing.core import MorphCore, morph_batch

from .bounds import required_pairs

logger = logging.getLogger(__name__)

Pair = Tuple[RowVector, RowVector]


@dataclass(frozen=True)
class RecoveryReport:
    """
    Outcome of one brute-force recovery.

    Attributes:
        recovered (RowVector): T^r·G⁻¹
        e_rms (float): RMS error against the true row
        sigma_threshold (float): σ/N^(1/4)
        success (bool): e_rms <= sigma_threshold
    """

    recovered: RowVector
    e_rms: float
    sigma_threshold: float
    success: bool


def brute_force_recover(tr: RowVector, g: Matrix, true_dr: RowVector, sigma: float) -> RecoveryReport:
    """
    Recover D^r from T^r with the attacker's guess G of the morphing matrix.

    Rows are scored as given; callers normalize to unit l² beforehand when
    they want the threshold to carry its usual meaning.

    Raises:
        DimensionMismatch: If G is not square
        LengthMismatch: If G, T^r and D^r disagree in length
        SingularMatrix: If G is numerically singular
    """
    sigma = GeometryValidator.validate_open_unit(sigma)
    width = tr.len
    if g.shape != (width, width) or true_dr.len != width:
        raise LengthMismatch(
            f"Guess {g.shape} does not fit rows of length {width} and {true_dr.len}"
        )
    g_inverse = invert(g)
    recovered = RowVector(accumulate_product(tr.data[np.newaxis, :], g_inverse.data)[0])
    error = erms(recovered, true_dr)
    threshold = reservation_threshold(sigma, width * width)
    return RecoveryReport(recovered, error, threshold, error <= threshold)


def brute_force_success_rate(q: int, sigma: float, trials: int, rng: SeededRng) -> float:
    """
    Fraction of random guesses that recover a unit row within the threshold.

    Each trial draws a core M′ and a guess G, both scaled to squared
    Frobenius norm q, and a unit row D; a trial succeeds when
    brute_force_recover on T = D·M′ reports success.
    """
    GeometryValidator.validate_positive_int(q, 'q')
    sigma = GeometryValidator.validate_open_unit(sigma)
    if trials < 1:
        raise ValidationError("trials must be positive")

    scale = math.sqrt(q)
    hits = 0
    skipped = 0
    for _ in range(trials):
        mprime = rng.normal(size=(q, q))
        guess = rng.normal(size=(q, q))
        row = rng.normal(size=q)
        mprime *= scale / np.linalg.norm(mprime)
        guess *= scale / np.linalg.norm(guess)
        row /= np.linalg.norm(row)
        tr = RowVector(accumulate_product(row[np.newaxis, :], mprime)[0])
        try:
            report = brute_force_recover(tr, Matrix(guess), RowVector(row), sigma)
        except SingularMatrix:
            skipped += 1
            continue
        hits += report.success

    if skipped:
        logger.debug("Skipped singular guesses", extra={'details': {'skipped': skipped}})
    return hits / trials


def make_pairs(core: MorphCore, count: int, rng: SeededRng) -> List[Pair]:
    """Draw ``count`` random rows and their morphed images under ``core``."""
    if count < 0:
        raise ValidationError("pair count must be non-negative")
    originals = rng.normal(size=(count, core.width))
    morphed = morph_batch(originals, core)
    return [(RowVector(d), RowVector(t)) for d, t in zip(originals, morphed)]


def stack_pairs(pairs: Sequence[Pair], q: int, kappa: int, mode: str = 'strict') -> Tuple[np.ndarray, np.ndarray]:
    """
    Build the q×q systems 𝔻 and 𝕋 from known pairs.

    Returns:
        tuple: (𝔻, 𝕋) as float arrays

    Raises:
        GeometryMismatch: If a pair's length differs from κ·q
        InsufficientPairs: If fewer pairs than the mode needs are given
    """
    needed = required_pairs(q, kappa, mode)
    width = kappa * q
    for index, (d, t) in enumerate(pairs):
        if d.len != width or t.len != width:
            raise GeometryMismatch(
                f"Pair {index} has lengths {d.len}/{t.len}, expected kappa*q={width}",
                details={'pair': index}
            )
    if len(pairs) < needed:
        raise InsufficientPairs(
            f"{mode} mode needs {needed} pairs for q={q}, got {len(pairs)}",
            details={'needed': needed, 'given': len(pairs)}
        )

    used = pairs[:needed]
    if mode == 'strict':
        big_d = np.stack([d.data[:q] for d, _ in used])
        big_t = np.stack([t.data[:q] for _, t in used])
    else:
        big_d = np.concatenate([d.data.reshape(kappa, q) for d, _ in used])[:q]
        big_t = np.concatenate([t.data.reshape(kappa, q) for _, t in used])[:q]
    return big_d, big_t


def dt_pair_attack(pairs: Sequence[Pair], q: int, kappa: int, mode: str = 'strict') -> Matrix:
    """
    Recover M′ from known D-T pairs by solving 𝔻·M′ = 𝕋.

    Args:
        pairs: (D^r, T^r) rows of length κ·q
        q: Core side
        kappa: Block count
        mode: 'strict' (q pairs) or 'segment' (⌈q/κ⌉ pairs)

    Returns:
        Matrix: Recovered core

    Raises:
        InsufficientPairs: Too few pairs
        GeometryMismatch: Pair length is not κ·q
        RankDeficient: The stacked 𝔻 is numerically singular
    """
    big_d, big_t = stack_pairs(pairs, q, kappa, mode)
    try:
        factor = lu_factor_checked(big_d)
    except SingularMatrix as e:
        raise RankDeficient(
            "Stacked originals are rank deficient; pairs are not independent",
            details=e.details
        )
    recovered = sla.lu_solve(factor, big_t, check_finite=False)
    logger.info("D-T pair attack solved", extra={'details': {'q': q, 'kappa': kappa, 'mode': mode}})
    return Matrix(recovered)


def relative_max_error(recovered: Matrix, truth: Matrix) -> float:
    """‖recovered − truth‖_max / ‖truth‖_max."""
    if recovered.shape != truth.shape:
        raise GeometryMismatch(f"Shapes differ: {recovered.shape} vs {truth.shape}")
    scale = float(np.max(np.abs(truth.data)))
    return float(np.max(np.abs(recovered.data - truth.data))) / scale


def dtpair_residual(pairs: Sequence[Pair], recovered: Matrix, kappa: int) -> float:
    """
    Largest relative mismatch between D·M and T over all given pairs.

    This is what a developer without the true core can measure.
    """
    q = recovered.rows
    worst = 0.0
    for d, t in pairs:
        predicted = accumulate_product(d.data.reshape(kappa, q), recovered.data).reshape(-1)
        scale = float(np.max(np.abs(t.data))) or 1.0
        worst = max(worst, float(np.max(np.abs(predicted - t.data))) / scale)
    return worst
