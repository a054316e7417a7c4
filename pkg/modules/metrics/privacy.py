"""
Privacy Metrics

This module quantifies how much of a datum survives morphing.

The metrics are responsible for:
1. E_rms between an original row and a recovered one
2. The privacy reservation check E_rms <= σ/N^(1/4)
3. The κ sweep: SSIM of the morphed image against the original per κ

Critical:
- Morphed images are clamped to [0, L] only for the SSIM measurement
- Sweep rows come back ordered by κ descending (q ascending)
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from core.error_handler import LengthMismatch, ValidationError
from core.linalg import DEFAULT_COND_MAX, RowVector, SeededRng
from core.validation import GeometryValidator
from modules.d2r.tensors import ImageTensor, reroll_image, unroll
from modules.morphing.core import choose_q, generate_core, morph, stream_morph

from .ssim import SsimParams, ssim

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRow:
    """One κ setting of a privacy sweep."""

    kappa: int
    q: int
    ssim: float


def erms(a: RowVector, b: RowVector) -> float:
    """
    Root mean square of the element-wise difference.

    Raises:
        LengthMismatch: If the rows differ in length
    """
    if a.len != b.len:
        raise LengthMismatch(f"Rows differ in length: {a.len} vs {b.len}")
    diff = a.data - b.data
    return math.sqrt(float(np.sum(diff * diff)) / a.len)


def reservation_threshold(sigma: float, n_elements: int) -> float:
    """σ/N^(1/4)."""
    return sigma / n_elements ** 0.25


def privacy_reservation_check(e: float, sigma: float, n_elements: int) -> bool:
    """
    True iff a recovery error e falls inside the privacy reservation.

    Raises:
        ValidationError: If σ is not in (0, 1) or N < 1
    """
    sigma = GeometryValidator.validate_open_unit(sigma)
    if n_elements < 1:
        raise ValidationError(f"N must be >= 1, got {n_elements}")
    return e <= reservation_threshold(sigma, n_elements)


def _display(image: ImageTensor, limit: float) -> ImageTensor:
    return ImageTensor(image.alpha, image.m, np.clip(image.data, 0.0, limit))


def privacy_sweep(image: ImageTensor, kappas: Sequence[int], rng: SeededRng,
                  params: SsimParams = SsimParams(),
                  cond_max: float = DEFAULT_COND_MAX,
                  max_dense: Optional[int] = None) -> List[SweepRow]:
    """
    SSIM between an image and its morphed version for each κ.

    Each κ draws its core from its own child of ``rng`` (in the order given),
    so adding a κ to the list does not change the other rows. Cores with q
    above ``max_dense`` are streamed by column blocks instead of being
    materialized; those rows skip the conditioning gate.

    Raises:
        NonDivisible: If some κ does not divide αm²
    """
    if not kappas:
        raise ValidationError("At least one kappa is required")
    total = image.size
    choices = [choose_q(image.alpha, image.m, kappa).q for kappa in kappas]
    row = unroll(image)

    rows = []
    for kappa, q, stream in zip(kappas, choices, rng.spawn(len(kappas))):
        if max_dense is not None and q > max_dense:
            morphed_row = stream_morph(row, q, kappa, stream)
        else:
            morphed_row = morph(row, generate_core(q, kappa, stream, cond_max))
        morphed = reroll_image(morphed_row, image.alpha, image.m)
        value = ssim(image, _display(morphed, params.dynamic_range), params)
        rows.append(SweepRow(kappa=kappa, q=q, ssim=value))
        logger.debug("Sweep row", extra={'details': {'kappa': kappa, 'q': q, 'ssim': value, 'elements': total}})
    return sorted(rows, key=lambda r: r.kappa, reverse=True)


def mean_privacy_sweep(images: Sequence[ImageTensor], kappas: Sequence[int], rng: SeededRng,
                       params: SsimParams = SsimParams(),
                       cond_max: float = DEFAULT_COND_MAX,
                       max_dense: Optional[int] = None) -> List[SweepRow]:
    """Average the sweep over several images; each image gets its own stream."""
    if not images:
        raise ValidationError("At least one image is required")
    sweeps = [
        privacy_sweep(image, kappas, stream, params, cond_max, max_dense)
        for image, stream in zip(images, rng.spawn(len(images)))
    ]
    return [
        SweepRow(kappa=rows[0].kappa, q=rows[0].q, ssim=float(np.mean([r.ssim for r in rows])))
        for rows in zip(*sweeps)
    ]
