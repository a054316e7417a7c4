"""
Data Morphing

This module builds the secret morphing core and applies or reverses data
morphing on unrolled rows.

The morphing matrix M is block diagonal: κ copies of the q×q core M′ with
κ·q = αm². It is never materialized on the execution path; each length-q
segment of a row is multiplied by M′ (or M′⁻¹) on its own.

Critical:
- κ must divide αm²
- M′⁻¹ is computed once, at construction
- Morphing is linear; nothing here clamps or rescales data
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from core.error_handler import GeometryMismatch, LengthMismatch, NonDivisible, ValidationError
from core.linalg import (
    DEFAULT_COND_MAX,
    Matrix,
    RowVector,
    SeededRng,
    accumulate_product,
    invert,
    random_entries,
    random_invertible,
)

logger = logging.getLogger(__name__)

INVERSE_RESIDUAL_WARN = 1e-9
STREAM_BLOCK_ELEMS = 8_000_000


@dataclass(frozen=True)
class QChoice:
    """Result of choose_q."""

    q: int
    kappa_max: Optional[int] = None
    bound_violated: bool = False


@dataclass(frozen=True)
class DpMacCount:
    """Extra MACs the data provider spends on morphing one datum."""

    closed_form: int
    direct: int


@dataclass(frozen=True)
class MorphCore:
    """
    The secret core M′ with its block count κ.

    Attributes:
        q (int): Block side
        mprime (Matrix): q×q core
        kappa (int): Number of diagonal blocks
        inverse (Matrix): Cached M′⁻¹
    """

    q: int
    mprime: Matrix
    kappa: int
    inverse: Matrix = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.q < 1 or self.kappa < 1:
            raise ValidationError(f"q and kappa must be positive, got q={self.q}, kappa={self.kappa}")
        if self.mprime.shape != (self.q, self.q):
            raise GeometryMismatch(f"Core has shape {self.mprime.shape}, expected {self.q}x{self.q}")
        if self.inverse is None:
            object.__setattr__(self, 'inverse', invert(self.mprime))
        residual = float(np.max(np.abs(self.inverse.data @ self.mprime.data - np.eye(self.q))))
        if residual > INVERSE_RESIDUAL_WARN:
            logger.warning("Core inverse residual is large", extra={'details': {'q': self.q, 'residual': residual}})

    @property
    def width(self) -> int:
        """Length of a morphable row (κ·q)."""
        return self.kappa * self.q

    def check_geometry(self, alpha: int, m: int) -> None:
        """
        Raises:
            GeometryMismatch: If κ·q != αm²
        """
        if self.width != alpha * m * m:
            raise GeometryMismatch(
                f"Core covers {self.width} elements but the data has {alpha * m * m}",
                details={'alpha': alpha, 'm': m, 'kappa': self.kappa}
            )


def choose_q(alpha: int, m: int, kappa: int, n: Optional[int] = None) -> QChoice:
    """
    Block side q = αm²/κ.

    When the feature side n is given, also evaluates the upper bound
    κ ≤ ⌊αm²/n²⌋ that keeps the reverse-convolution system underdetermined,
    and flags (with a logged warning) a κ above it.

    Raises:
        NonDivisible: If κ does not divide αm²
    """
    if min(alpha, m, kappa) < 1:
        raise ValidationError("alpha, m and kappa must be positive integers")
    total = alpha * m * m
    if total % kappa:
        raise NonDivisible(
            f"kappa={kappa} does not divide alpha*m^2={total}",
            details={'alpha': alpha, 'm': m, 'kappa': kappa}
        )
    q = total // kappa
    if n is None:
        return QChoice(q)
    if n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    kappa_max = total // (n * n)
    violated = kappa > kappa_max
    if violated:
        logger.warning(
            "Morphing scale factor exceeds the reverse-attack bound",
            extra={'details': {'kappa': kappa, 'kappa_max': kappa_max}}
        )
    return QChoice(q, kappa_max, violated)


def generate_core(q: int, kappa: int, rng: SeededRng, cond_max: float = DEFAULT_COND_MAX) -> MorphCore:
    """Sample a fresh secret core with nonzero, well-conditioned entries."""
    logger.info("Generating morphing core", extra={'details': {'q': q, 'kappa': kappa}})
    return MorphCore(q, random_invertible(q, rng, cond_max), kappa)


def identity_core(q: int, kappa: int) -> MorphCore:
    """M′ = I; morphing becomes a no-op. For debugging and tests only."""
    return MorphCore(q, Matrix.identity(q), kappa)


def build_morph_matrix(core: MorphCore) -> Matrix:
    """Materialize the αm²×αm² block-diagonal M."""
    q = core.q
    dense = np.zeros((core.width, core.width), dtype=np.float64)
    for block in range(core.kappa):
        dense[block * q:(block + 1) * q, block * q:(block + 1) * q] = core.mprime.data
    return Matrix(dense)


def _blockwise(rows: np.ndarray, block: np.ndarray, core: MorphCore) -> np.ndarray:
    if rows.shape[-1] != core.width:
        raise LengthMismatch(
            f"Row length {rows.shape[-1]} does not match kappa*q={core.width}",
            details={'length': int(rows.shape[-1]), 'expected': core.width}
        )
    count = rows.shape[0]
    segments = rows.reshape(count * core.kappa, core.q)
    return accumulate_product(segments, block).reshape(count, core.width)


def morph(dr: RowVector, core: MorphCore) -> RowVector:
    """
    T^r = D^r·M, computed segment by segment.

    Raises:
        LengthMismatch: If len(dr) != κ·q
    """
    return RowVector(_blockwise(dr.data[np.newaxis, :], core.mprime.data, core)[0])


def unmorph(tr: RowVector, core: MorphCore) -> RowVector:
    """
    D^r = T^r·M⁻¹, computed segment by segment.

    Raises:
        LengthMismatch: If len(tr) != κ·q
    """
    return RowVector(_blockwise(tr.data[np.newaxis, :], core.inverse.data, core)[0])


def morph_batch(rows: np.ndarray, core: MorphCore) -> np.ndarray:
    """Morph every row of a (count, κq) array."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.shape[0] == 0:
        return np.zeros((0, core.width))
    return _blockwise(rows, core.mprime.data, core)


def unmorph_batch(rows: np.ndarray, core: MorphCore) -> np.ndarray:
    """Unmorph every row of a (count, κq) array."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.shape[0] == 0:
        return np.zeros((0, core.width))
    return _blockwise(rows, core.inverse.data, core)


def stream_morph(dr: RowVector, q: int, kappa: int, rng: SeededRng,
                 block_elems: int = STREAM_BLOCK_ELEMS) -> RowVector:
    """
    T^r = D^r·M with M′ drawn a few columns at a time and never stored.

    Used for views where only the morphed data matters and a dense q×q core
    would not fit in memory. No conditioning gate is applied and no inverse
    exists, so the result cannot be unmorphed.

    Raises:
        ValidationError: If q, kappa or block_elems is not positive
        LengthMismatch: If len(dr) != κ·q
    """
    if min(q, kappa, block_elems) < 1:
        raise ValidationError("q, kappa and block_elems must be positive integers")
    width = kappa * q
    if dr.len != width:
        raise LengthMismatch(
            f"Row length {dr.len} does not match kappa*q={width}",
            details={'length': dr.len, 'expected': width}
        )
    segments = dr.data.reshape(kappa, q)
    out = np.empty((kappa, q), dtype=np.float64)
    step = max(1, block_elems // q)
    for start in range(0, q, step):
        stop = min(q, start + step)
        out[:, start:stop] = segments @ random_entries(rng, (q, stop - start))
    logger.info("Streamed morph", extra={'details': {'q': q, 'kappa': kappa, 'column_blocks': -(-q // step)}})
    return RowVector(out.reshape(width))


def dp_mac_count(alpha: int, q: int, kappa: int) -> DpMacCount:
    """
    Morphing MACs per datum.

    ``closed_form`` is the αq² count; ``direct`` is κq², the
    multiplications the segment-wise morph actually performs. Both are
    reported because they differ whenever α != κ.
    """
    if min(alpha, q, kappa) < 1:
        raise ValidationError("alpha, q and kappa must be positive integers")
    return DpMacCount(closed_form=alpha * q * q, direct=kappa * q * q)
