"""
Metrics feature module

SSIM privacy evaluation, the privacy reservation and overhead reporting.
"""

from modules.metrics.ssim import SsimParams, ssim
from modules.metrics.privacy import (
    SweepRow,
    erms,
    mean_privacy_sweep,
    privacy_reservation_check,
    privacy_sweep,
    reservation_threshold,
)
from modules.metrics.reservation import ReservationRow, reservation_recovery_demo
from modules.metrics.overhead import OverheadReport, overhead_report

__all__ = [
    'OverheadReport', 'ReservationRow', 'SsimParams', 'SweepRow', 'erms',
    'mean_privacy_sweep', 'overhead_report', 'privacy_reservation_check',
    'privacy_sweep', 'reservation_recovery_demo', 'reservation_threshold', 'ssim',
]
