"""
path: modules/metrics/reservation.py
purpose: Shows how recovery quality degrades as the attacker's inverse guess drifts
critical:
- The guess is G = M′⁻¹ + E with ‖E‖_F = σ·‖M′⁻¹‖_F
- E_rms is measured on unit-normalized rows; the threshold uses N = q²
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from core.error_handler import ZeroNorm
from core.linalg import DEFAULT_COND_MAX, RowVector, SeededRng, accumulate_product
from core.validation import GeometryValidator
from modules.d2r.tensors import ImageTensor, reroll_image, unroll
from modules.morphing.core import choose_q, generate_core, morph

from .privacy import erms, privacy_reservation_check, reservation_threshold
from .ssim import SsimParams, ssim

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReservationRow:
    """Recovery quality at one perturbation level σ."""

    sigma: float
    e_rms: float
    threshold: float
    within_reservation: bool
    ssim: float


def reservation_recovery_demo(image: ImageTensor, sigmas: Sequence[float], kappa: int,
                              rng: SeededRng, params: SsimParams = SsimParams(),
                              cond_max: float = DEFAULT_COND_MAX) -> List[ReservationRow]:
    """
    Morph an image, then recover it with progressively worse inverse guesses.

    Returns:
        List[ReservationRow]: One row per σ, in the order given
    """
    sigmas = [GeometryValidator.validate_open_unit(s) for s in sigmas]
    q = choose_q(image.alpha, image.m, kappa).q
    key_stream, noise_stream = rng.spawn(2)
    core = generate_core(q, kappa, key_stream, cond_max)

    original = unroll(image)
    norm = float(np.linalg.norm(original.data))
    if norm == 0.0:
        raise ZeroNorm("Cannot normalize an all-zero image")
    segments = morph(original, core).data.reshape(kappa, q)
    inverse = core.inverse.data
    inverse_norm = float(np.linalg.norm(inverse))
    unit_original = RowVector(original.data / norm)

    rows = []
    for sigma, stream in zip(sigmas, noise_stream.spawn(len(sigmas))):
        noise = stream.normal(size=(q, q))
        noise *= sigma * inverse_norm / np.linalg.norm(noise)
        recovered = accumulate_product(segments, inverse + noise).reshape(-1)
        error = erms(RowVector(recovered / norm), unit_original)
        picture = reroll_image(RowVector(np.clip(recovered, 0.0, params.dynamic_range)), image.alpha, image.m)
        rows.append(ReservationRow(
            sigma=sigma,
            e_rms=error,
            threshold=reservation_threshold(sigma, q * q),
            within_reservation=privacy_reservation_check(error, sigma, q * q),
            ssim=ssim(image, picture, params),
        ))
    logger.info("Reservation demo complete", extra={'details': {'kappa': kappa, 'levels': len(rows)}})
    return rows
