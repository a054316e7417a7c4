"""
Monte-Carlo Validation

This module checks the two geometric facts behind the brute-force bound by
simulation at small dimension:

1. Two uniform points of the unit (N−1)-sphere are within distance d with
   probability at most ½·d^(N−1) (compared against the exact cap area too)
2. For a unit row T with i.i.d. direction, E‖T·(M⁻¹ − G)‖² = ‖M⁻¹ − G‖²_F / N′

Critical:
- Trials run in chunks; chunk k always uses child stream k of the caller's
  rng, so results do not depend on the worker count
- N is limited to [2, 16] and N′ to [4, 64]; the bounds are untestably
  small beyond that
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.special import betainc, gammaln

from core.error_handler import DimensionMismatch, DomainError, ValidationError
from core.linalg import SeededRng, accumulate_product

logger = logging.getLogger(__name__)

CHUNK = 50_000
MIN_TRIALS = 10_000
LEMMA1_DIMS = (2, 16)
LEMMA2_DIMS = (4, 64)


@dataclass(frozen=True)
class Lemma2Result:
    """Empirical vs predicted mean squared error of the recovered row."""

    mean_sse: float
    expected: float
    residual: float


def binomial_se(p: float, trials: int) -> float:
    """Standard error of a binomial proportion."""
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)


def _chunks(trials: int) -> List[int]:
    full, rest = divmod(trials, CHUNK)
    return [CHUNK] * full + ([rest] if rest else [])


def _unit_rows(rng: SeededRng, count: int, dims: int) -> np.ndarray:
    z = rng.normal(size=(count, dims))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def cap_fraction_exact(n_dims: int, d: float) -> float:
    """
    Exact share of the unit (N−1)-sphere within chord distance d of a point.

    ½·I_{sin²θ}((N−1)/2, ½) with cos θ = 1 − d²/2, valid for d ≤ √2.
    """
    if n_dims < 2:
        raise ValidationError(f"N must be >= 2, got {n_dims}")
    if not 0.0 <= d <= math.sqrt(2.0):
        raise DomainError(f"cap formula needs 0 <= d <= sqrt(2), got {d}")
    cos_theta = 1.0 - d * d / 2.0
    sin2 = 1.0 - cos_theta * cos_theta
    return 0.5 * float(betainc((n_dims - 1) / 2.0, 0.5, sin2))


def lemma1_montecarlo(n_dims: int, d: float, trials: int, rng: SeededRng, workers: int = 1) -> float:
    """
    Empirical chance that two uniform points of the unit sphere are within d.

    Args:
        n_dims: Ambient dimension N, in [2, 16]
        d: Distance threshold in (0, 1]
        trials: Number of point pairs, at least 10⁴
        rng: Parent stream; one child per chunk of 50 000 pairs
        workers: Threads used for chunks

    Returns:
        float: Hit fraction

    Raises:
        ValidationError: On N or trials out of range
        DomainError: If d is not in (0, 1]
    """
    low, high = LEMMA1_DIMS
    if not low <= n_dims <= high:
        raise ValidationError(f"N must lie in [{low}, {high}], got {n_dims}")
    if trials < MIN_TRIALS:
        raise ValidationError(f"trials must be >= {MIN_TRIALS}, got {trials}")
    if not 0.0 < d <= 1.0:
        raise DomainError(f"distance d must satisfy 0 < d <= 1, got {d}")

    sizes = _chunks(trials)
    streams = rng.spawn(len(sizes))

    def run(index: int) -> int:
        stream, size = streams[index], sizes[index]
        x = _unit_rows(stream, size, n_dims)
        y = _unit_rows(stream, size, n_dims)
        return int(np.count_nonzero(np.linalg.norm(x - y, axis=1) <= d))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        hits = sum(pool.map(run, range(len(sizes))))

    fraction = hits / trials
    logger.debug("Lemma 1 Monte Carlo", extra={'details': {
        'N': n_dims, 'd': d, 'trials': trials, 'fraction': fraction
    }})
    return fraction


def lemma2_residual(minv: np.ndarray, g: np.ndarray, trials: int, rng: SeededRng) -> Lemma2Result:
    """
    Compare the mean SSE of T·M⁻¹ − T·G over random unit rows T with
    ‖M⁻¹ − G‖²_F / N′.

    The residual is |mean − expected| / expected, and 0 when both vanish.
    """
    minv = np.asarray(minv, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if minv.shape != g.shape or minv.ndim != 2 or minv.shape[0] != minv.shape[1]:
        raise DimensionMismatch(f"Expected two equal square matrices, got {minv.shape} and {g.shape}")
    n_prime = minv.shape[0]
    delta = minv - g
    expected = float(np.sum(delta * delta)) / n_prime

    total = 0.0
    for stream, size in zip(rng.spawn(len(_chunks(trials))), _chunks(trials)):
        t = _unit_rows(stream, size, n_prime)
        diff = accumulate_product(t, delta)
        total += float(np.sum(diff * diff))
    mean_sse = total / trials

    if expected == 0.0:
        residual = 0.0 if mean_sse == 0.0 else math.inf
    else:
        residual = abs(mean_sse - expected) / expected
    return Lemma2Result(mean_sse, expected, residual)


def lemma2_check(n_prime: int, trials: int, rng: SeededRng) -> float:
    """
    Relative residual of the SSE expectation identity for random M⁻¹ and G,
    both scaled to squared Frobenius norm N′.

    Raises:
        ValidationError: If N′ is outside [4, 64] or trials < 1
    """
    low, high = LEMMA2_DIMS
    if not low <= n_prime <= high:
        raise ValidationError(f"N' must lie in [{low}, {high}], got {n_prime}")
    if trials < 1:
        raise ValidationError("trials must be positive")
    draw, sample = rng.spawn(2)
    minv = draw.normal(size=(n_prime, n_prime))
    g = draw.normal(size=(n_prime, n_prime))
    scale = math.sqrt(n_prime)
    minv *= scale / np.linalg.norm(minv)
    g *= scale / np.linalg.norm(g)
    result = lemma2_residual(minv, g, trials, sample)
    logger.debug("Lemma 2 check", extra={'details': {
        'N_prime': n_prime, 'trials': trials, 'residual': result.residual
    }})
    return result.residual


def log2_sphere_area(n_dims: int, radius: float = 1.0) -> float:
    """log2 of the surface area of the (N−1)-sphere of the given radius in R^N."""
    if n_dims < 1:
        raise ValidationError(f"N must be >= 1, got {n_dims}")
    if radius <= 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    ln_area = math.log(2.0) + (n_dims / 2.0) * math.log(math.pi) - float(gammaln(n_dims / 2.0))
    return ln_area / math.log(2.0) + (n_dims - 1) * math.log2(radius)
