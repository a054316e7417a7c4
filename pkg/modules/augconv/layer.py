"""
Aug-Conv Layer

This module builds the Aug-Conv matrix C^ac = M⁻¹·C with shuffled output
channel groups and applies it to morphed rows.

The Aug-Conv layer is responsible for:
1. Drawing the secret channel permutation
2. Folding M⁻¹ into the developer's first convolution, band by band
3. Shuffling the β column groups of n² columns each
4. Extracting features from morphed data

Critical:
- Column group j of C^ac holds group order[j] of M⁻¹·C, so extracted
  feature channel j equals clean feature channel order[j]
- C^ac carries no field from which M′ or the order can be read back
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from typing_extensions import Self

from core.error_handler import GeometryMismatch, LengthMismatch, ValidationError
from core.linalg import Matrix, RowVector, SeededRng, accumulate_product, invert
from modules.d2r.lowering import ConvMatrix
from modules.d2r.tensors import FeatureTensor, Padding, reroll_features
from modules.morphing.core import MorphCore

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelPermutation:
    """
    Order of the output channel groups.

    Attributes:
        beta (int): Number of channels
        order (tuple): order[j] is the original channel placed at position j
    """

    beta: int
    order: tuple

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if len(order) != self.beta or sorted(order) != list(range(self.beta)):
            raise ValidationError(f"order is not a permutation of 0..{self.beta - 1}")
        object.__setattr__(self, 'order', order)

    @classmethod
    def identity(cls, beta: int) -> Self:
        return cls(beta, tuple(range(beta)))

    @property
    def is_identity(self) -> bool:
        return self.order == tuple(range(self.beta))

    def inverse(self) -> 'ChannelPermutation':
        inverse = [0] * self.beta
        for position, channel in enumerate(self.order):
            inverse[channel] = position
        return ChannelPermutation(self.beta, tuple(inverse))


@dataclass(frozen=True)
class AugConvMatrix:
    """The matrix shipped to the developer, with its public geometry."""

    matrix: Matrix
    alpha: int
    m: int
    beta: int
    n: int
    p: int
    padding: Padding
    permuted: bool

    def __post_init__(self):
        object.__setattr__(self, 'padding', Padding.parse(self.padding))
        expected = (self.alpha * self.m * self.m, self.beta * self.n * self.n)
        if self.matrix.shape != expected:
            raise GeometryMismatch(f"Aug-Conv matrix has shape {self.matrix.shape}, expected {expected}")

    def geometry(self) -> dict:
        return {
            'alpha': self.alpha, 'm': self.m, 'beta': self.beta, 'n': self.n,
            'p': self.p, 'padding': self.padding.value, 'permuted': self.permuted,
        }


def random_permutation(beta: int, rng: SeededRng) -> ChannelPermutation:
    """
    Uniform permutation of β channels by Fisher-Yates.

    Raises:
        ValidationError: If β < 1
    """
    if beta < 1:
        raise ValidationError(f"beta must be >= 1, got {beta}")
    order = list(range(beta))
    for i in range(beta - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        order[i], order[j] = order[j], order[i]
    return ChannelPermutation(beta, tuple(order))


def permute_column_groups(matrix: np.ndarray, perm: ChannelPermutation, group: int) -> np.ndarray:
    """Reorder contiguous column groups: new group j is old group order[j]."""
    columns = (np.asarray(perm.order)[:, np.newaxis] * group + np.arange(group)).reshape(-1)
    return matrix[:, columns]


def build_augconv(core: MorphCore, c: ConvMatrix, perm: ChannelPermutation) -> AugConvMatrix:
    """
    Fold M⁻¹ into C and shuffle the output channel groups.

    Each q-row band of C is multiplied by M′⁻¹ on its own, which equals the
    full block-diagonal product M⁻¹·C.

    Raises:
        GeometryMismatch: If κ·q != αm² of C, or perm.beta != C's β
    """
    core.check_geometry(c.alpha, c.m)
    if perm.beta != c.beta:
        raise GeometryMismatch(f"Permutation covers {perm.beta} channels, the layer has {c.beta}")

    q = core.q
    bands = c.matrix.data.reshape(core.kappa, q, -1)
    folded = np.concatenate([accumulate_product(core.inverse.data, band) for band in bands], axis=0)
    shuffled = permute_column_groups(folded, perm, c.n * c.n)
    logger.info("Built Aug-Conv matrix", extra={'details': {
        'alpha': c.alpha, 'm': c.m, 'beta': c.beta, 'n': c.n, 'p': c.p
    }})
    return AugConvMatrix(Matrix(shuffled), c.alpha, c.m, c.beta, c.n, c.p, c.padding, not perm.is_identity)


def apply_augconv(tr: RowVector, ac: AugConvMatrix) -> FeatureTensor:
    """
    Features of one morphed row: reroll(T^r·C^ac).

    Raises:
        LengthMismatch: If len(tr) != αm²
    """
    if len(tr) != ac.matrix.rows:
        raise LengthMismatch(f"Morphed row has length {len(tr)}, the layer expects {ac.matrix.rows}")
    row = accumulate_product(tr.data[np.newaxis, :], ac.matrix.data)[0]
    return reroll_features(RowVector(row), ac.beta, ac.n)


def apply_augconv_batch(rows: np.ndarray, ac: AugConvMatrix) -> List[FeatureTensor]:
    """Features of every row of a (count, αm²) array."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.shape[0] == 0:
        return []
    if rows.ndim != 2 or rows.shape[1] != ac.matrix.rows:
        raise LengthMismatch(f"Morphed rows have width {rows.shape[-1]}, the layer expects {ac.matrix.rows}")
    products = accumulate_product(rows, ac.matrix.data)
    return [reroll_features(RowVector(row), ac.beta, ac.n) for row in products]


def unpermute_features(f: FeatureTensor, perm: ChannelPermutation) -> FeatureTensor:
    """Undo the channel shuffle: the result's channel order[j] is f's channel j."""
    if f.beta != perm.beta:
        raise GeometryMismatch(f"Features have {f.beta} channels, permutation covers {perm.beta}")
    return f.permuted(perm.inverse().order)


def inverse_conv_recover(features: Sequence[float], c: ConvMatrix) -> RowVector:
    """
    Reverse-convolution attack for a square, invertible C: D^r = F^r·C⁻¹.

    Only defined for α = β, p = 1 with valid padding, where C is αm²×αm².

    Raises:
        GeometryMismatch: If C is not square
        SingularMatrix: If C is not invertible
    """
    if c.matrix.rows != c.matrix.cols:
        raise GeometryMismatch(
            f"Reverse convolution needs a square matrix, got {c.matrix.rows}x{c.matrix.cols}"
        )
    row = features.data.reshape(-1) if isinstance(features, (FeatureTensor, RowVector)) else np.asarray(features).reshape(-1)
    if row.shape[0] != c.matrix.cols:
        raise LengthMismatch(f"Feature row has length {row.shape[0]}, expected {c.matrix.cols}")
    inverse = invert(c.matrix)
    return RowVector(accumulate_product(row[np.newaxis, :], inverse.data)[0])
