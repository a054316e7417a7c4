"""
Convolution Lowering

This module lowers a stride-1 multi-channel convolution to a single
row-vector × matrix product and provides the sliding-window oracle it is
checked against.

The lowering is responsible for:
1. Building the dense αm²×βn² matrix C from a kernel set
2. Direct cross-correlation (no kernel flip, no bias) as the reference
3. Applying C to single images and to batches

Critical:
- Valid padding gives n = m − p + 1; same (zero) padding gives n = m and needs odd p
- Each (input, output) index pair of C receives at most one kernel weight
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from core.error_handler import GeometryMismatch, ValidationError
from core.linalg import Matrix, RowVector, SeededRng, accumulate_product

from .tensors import FeatureTensor, ImageTensor, KernelSet, Padding, reroll_features, unroll, unroll_batch

logger = logging.getLogger(__name__)


def output_side(m: int, p: int, padding: Padding) -> int:
    """
    Spatial side n of the feature map.

    Raises:
        GeometryMismatch: If valid padding has m < p
        ValidationError: If same padding has an even kernel side
    """
    padding = Padding.parse(padding)
    if padding is Padding.VALID:
        if m < p:
            raise GeometryMismatch(f"Valid padding requires m >= p (m={m}, p={p})")
        return m - p + 1
    if p % 2 == 0:
        raise ValidationError(f"Same padding requires an odd kernel side, got p={p}")
    return m


@dataclass(frozen=True)
class ConvMatrix:
    """Lowered convolution matrix with its geometry."""

    matrix: Matrix
    alpha: int
    m: int
    beta: int
    n: int
    p: int
    padding: Padding

    def __post_init__(self):
        object.__setattr__(self, 'padding', Padding.parse(self.padding))
        expected = (self.alpha * self.m * self.m, self.beta * self.n * self.n)
        if self.matrix.shape != expected:
            raise GeometryMismatch(f"ConvMatrix has shape {self.matrix.shape}, expected {expected}")
        if output_side(self.m, self.p, self.padding) != self.n:
            raise GeometryMismatch(f"n={self.n} is inconsistent with m={self.m}, p={self.p}, {self.padding.value}")


def _weight_positions(alpha: int, m: int, beta: int, p: int, padding: Padding):
    """Row index, column index and kernel index of every nonzero of C."""
    n = output_side(m, p, padding)
    shift = 0 if padding is Padding.VALID else p // 2
    i, j, a, b, c, d = np.meshgrid(
        np.arange(alpha), np.arange(beta), np.arange(p), np.arange(p),
        np.arange(n), np.arange(n), indexing='ij'
    )
    row = c + a - shift
    col = d + b - shift
    inside = (row >= 0) & (row < m) & (col >= 0) & (col < m)
    x = i * m * m + row * m + col
    y = j * n * n + c * n + d
    return x[inside], y[inside], (i[inside], j[inside], a[inside], b[inside]), n


def build_conv_matrix(k: KernelSet, m: int, padding=Padding.VALID) -> ConvMatrix:
    """
    Build the dense convolution matrix C.

    Every weight k[i, j, a, b] is placed at row i·m² + (c+a−s)·m + (d+b−s)
    and column j·n² + c·n + d for each output position (c, d), where s is 0
    for valid padding and ⌊p/2⌋ for same padding. Positions whose input
    coordinate leaves the image are dropped.

    Args:
        k: Kernel set
        m: Input side
        padding: 'valid' or 'same'

    Returns:
        ConvMatrix: The lowered matrix and its geometry
    """
    padding = Padding.parse(padding)
    x, y, (i, j, a, b), n = _weight_positions(k.alpha, m, k.beta, k.p, padding)
    dense = np.zeros((k.alpha * m * m, k.beta * n * n), dtype=np.float64)
    dense[x, y] = k.weights[i, j, a, b]
    logger.debug("Built convolution matrix", extra={'details': {
        'alpha': k.alpha, 'm': m, 'beta': k.beta, 'n': n, 'p': k.p, 'padding': padding.value
    }})
    return ConvMatrix(Matrix(dense), k.alpha, m, k.beta, n, k.p, padding)


def conv_direct(d: ImageTensor, k: KernelSet, padding=Padding.VALID) -> FeatureTensor:
    """
    Stride-1 cross-correlation summed over input channels.

    Raises:
        GeometryMismatch: If image and kernel channel counts differ
    """
    padding = Padding.parse(padding)
    if d.alpha != k.alpha:
        raise GeometryMismatch(f"Image has {d.alpha} channels but kernels expect {k.alpha}")
    n = output_side(d.m, k.p, padding)
    shift = 0 if padding is Padding.VALID else k.p // 2
    source = np.pad(d.data, ((0, 0), (shift, shift), (shift, shift))) if shift else d.data

    out = np.zeros((k.beta, n, n), dtype=np.float64)
    for a in range(k.p):
        for b in range(k.p):
            window = source[:, a:a + n, b:b + n]
            out += np.einsum('ihw,ij->jhw', window, k.weights[:, :, a, b])
    return FeatureTensor(k.beta, n, out)


def conv_via_d2r(d: ImageTensor, c: ConvMatrix) -> FeatureTensor:
    """
    Convolution as unroll(D)·C, rerolled to β×n×n.

    Raises:
        GeometryMismatch: If c was built for another image geometry
    """
    if (d.alpha, d.m) != (c.alpha, c.m):
        raise GeometryMismatch(
            f"Image is {d.alpha}x{d.m}x{d.m} but the matrix expects {c.alpha}x{c.m}x{c.m}"
        )
    row = accumulate_product(unroll(d).data[np.newaxis, :], c.matrix.data)[0]
    return reroll_features(RowVector(row), c.beta, c.n)


def conv_batch_via_d2r(images: Sequence[ImageTensor], c: ConvMatrix) -> List[FeatureTensor]:
    """Apply C to a batch of images with one stacked product."""
    if not images:
        return []
    rows = unroll_batch(images)
    if rows.shape[1] != c.matrix.rows:
        raise GeometryMismatch(f"Images have {rows.shape[1]} elements, matrix expects {c.matrix.rows}")
    products = accumulate_product(rows, c.matrix.data)
    return [reroll_features(RowVector(row), c.beta, c.n) for row in products]


def random_kernels(alpha: int, beta: int, p: int, rng: SeededRng) -> KernelSet:
    """Stand-in for a developer's pre-trained first layer: N(0, 1)/p weights."""
    return KernelSet(alpha, beta, p, rng.normal(0.0, 1.0, size=(alpha, beta, p, p)) / p)
