"""
path: modules/metrics/overhead.py
purpose: Consolidates the provider, developer and data overheads into one report
critical:
- Counts are exact integers; ratios only appear when a baseline is given
- No input describes network depth, and data_elements ignores dataset size
"""

from dataclasses import dataclass
from typing import Optional

from core.error_handler import ValidationError
from modules.augconv.overhead import data_overhead, dev_mac_overhead
from modules.morphing.core import choose_q, dp_mac_count

DEPTH_NOTE = (
    "No parameter encodes network depth; data_elements = (alpha*m^2)^2 "
    "does not depend on the dataset size, beta, p or n."
)


@dataclass(frozen=True)
class OverheadReport:
    """
    Overheads of one MoLe configuration.

    Attributes:
        dp_macs_closed_form (int): Provider MACs per datum, αq²
        dp_macs_direct (int): Provider MACs the segment-wise morph performs, κq²
        dev_macs (int): Extra developer MACs per datum
        data_elements (int): Elements of the shipped Aug-Conv layer
        dev_ratio (float): dev_macs / base_macs, when base_macs is given
        data_ratio (float): data_elements / dataset_elems, when given
        note (str): Scope statement
    """

    dp_macs_closed_form: int
    dp_macs_direct: int
    dev_macs: int
    data_elements: int
    dev_ratio: Optional[float] = None
    data_ratio: Optional[float] = None
    note: str = DEPTH_NOTE


def overhead_report(alpha: int, m: int, p: int, beta: int, n: int, kappa: int,
                    base_macs: Optional[int] = None,
                    dataset_elems: Optional[int] = None) -> OverheadReport:
    """
    Aggregate dp_mac_count, dev_mac_overhead and data_overhead.

    Raises:
        ValidationError: On invalid geometry or a non-positive baseline
        NonDivisible: If κ does not divide αm²
    """
    q = choose_q(alpha, m, kappa).q
    dp = dp_mac_count(alpha, q, kappa)
    dev = dev_mac_overhead(alpha, m, p, beta, n)
    elements = (alpha * m * m) ** 2

    dev_ratio = None
    if base_macs is not None:
        if base_macs <= 0:
            raise ValidationError(f"base_macs must be positive, got {base_macs}")
        dev_ratio = dev / base_macs
    data_ratio = None
    if dataset_elems is not None:
        data_ratio = data_overhead(alpha, m, dataset_elems).ratio

    return OverheadReport(
        dp_macs_closed_form=dp.closed_form,
        dp_macs_direct=dp.direct,
        dev_macs=dev,
        data_elements=elements,
        dev_ratio=dev_ratio,
        data_ratio=data_ratio,
    )
