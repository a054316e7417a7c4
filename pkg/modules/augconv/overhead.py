"""
Aug-Conv overheads: size of the shipped layer and extra developer MACs.
"""

from dataclasses import dataclass

from core.error_handler import ValidationError


@dataclass(frozen=True)
class DataOverhead:
    """Elements of C^ac's fold-in and their share of a dataset."""

    elements: int
    ratio: float


def data_overhead(alpha: int, m: int, dataset_elems: int) -> DataOverhead:
    """
    Extra data the provider ships: (αm²)² elements, whatever the depth or
    the size of the dataset.

    Raises:
        ValidationError: If dataset_elems <= 0
    """
    if dataset_elems <= 0:
        raise ValidationError(f"dataset_elems must be positive, got {dataset_elems}")
    elements = (alpha * m * m) ** 2
    return DataOverhead(elements, elements / dataset_elems)


def dev_mac_overhead(alpha: int, m: int, p: int, beta: int, n: int) -> int:
    """Extra developer MACs per datum: (m² − p²)·α·β·n²."""
    if min(alpha, m, p, beta, n) < 1 or p > m:
        raise ValidationError("Geometry must be positive with p <= m")
    return (m * m - p * p) * alpha * beta * n * n
