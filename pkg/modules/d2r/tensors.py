"""
d2r Tensors

Image, kernel and feature carriers plus the unroll/reroll layout rules.

Layout: channel-major, then row-major within a channel. Element (i, c, d)
of an α×m×m tensor sits at index i·m² + c·m + d of the unrolled row.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from typing_extensions import Self

from core.error_handler import GeometryMismatch, LengthMismatch, NumericError, ValidationError
from core.linalg import RowVector

logger = logging.getLogger(__name__)


class Padding(str, Enum):
    """Convolution padding rule."""

    VALID = 'valid'
    SAME_ZERO = 'same'

    @classmethod
    def parse(cls, value) -> 'Padding':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValidationError(f"Unknown padding mode {value!r}; use 'valid' or 'same'")


def _readonly(values, shape, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.shape != shape:
        raise GeometryMismatch(f"{what} data has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{what} contains NaN or Inf entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ImageTensor:
    """α-channel m×m input datum."""

    alpha: int
    m: int
    data: np.ndarray

    def __post_init__(self):
        if self.alpha < 1 or self.m < 1:
            raise ValidationError(f"Image geometry must be positive, got alpha={self.alpha}, m={self.m}")
        object.__setattr__(self, 'data', _readonly(self.data, (self.alpha, self.m, self.m), "ImageTensor"))

    @classmethod
    def from_array(cls, values) -> Self:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[np.newaxis]
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise GeometryMismatch(f"Expected (alpha, m, m) image data, got shape {arr.shape}")
        return cls(arr.shape[0], arr.shape[1], arr)

    @property
    def size(self) -> int:
        return self.alpha * self.m * self.m


@dataclass(frozen=True)
class KernelSet:
    """
    α×β set of p×p kernels.

    ``weights[i, j, a, b]`` is the weight linking input channel i to output
    channel j at kernel offset (a, b).
    """

    alpha: int
    beta: int
    p: int
    weights: np.ndarray

    def __post_init__(self):
        if min(self.alpha, self.beta, self.p) < 1:
            raise ValidationError("Kernel geometry must be positive")
        object.__setattr__(
            self, 'weights',
            _readonly(self.weights, (self.alpha, self.beta, self.p, self.p), "KernelSet")
        )

    @classmethod
    def from_array(cls, values) -> Self:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 4 or arr.shape[2] != arr.shape[3]:
            raise GeometryMismatch(f"Expected (alpha, beta, p, p) kernel data, got shape {arr.shape}")
        return cls(arr.shape[0], arr.shape[1], arr.shape[2], arr)


@dataclass(frozen=True)
class FeatureTensor:
    """β-channel n×n feature map."""

    beta: int
    n: int
    data: np.ndarray

    def __post_init__(self):
        if self.beta < 1 or self.n < 1:
            raise ValidationError(f"Feature geometry must be positive, got beta={self.beta}, n={self.n}")
        object.__setattr__(self, 'data', _readonly(self.data, (self.beta, self.n, self.n), "FeatureTensor"))

    def permuted(self, order: Sequence[int]) -> 'FeatureTensor':
        """Channel j of the result is channel order[j] of this tensor."""
        return FeatureTensor(self.beta, self.n, self.data[np.asarray(order)])


def unroll(d: ImageTensor) -> RowVector:
    """Unroll an image to its αm² row vector."""
    return RowVector(d.data.reshape(-1))


def unroll_batch(images: Sequence[ImageTensor]) -> np.ndarray:
    """Stack unrolled images as rows of a (count, αm²) array."""
    if not images:
        return np.zeros((0, 0))
    width = images[0].size
    for index, image in enumerate(images):
        if image.size != width:
            raise GeometryMismatch(f"Image {index} has {image.size} elements, expected {width}",
                                   details={'item': index})
    return np.stack([image.data.reshape(-1) for image in images])


def reroll_image(v: RowVector, alpha: int, m: int) -> ImageTensor:
    """Inverse of unroll."""
    data = v.data if isinstance(v, RowVector) else np.asarray(v, dtype=np.float64)
    if data.shape[0] != alpha * m * m:
        raise LengthMismatch(f"Row of length {data.shape[0]} cannot reroll to {alpha}x{m}x{m}")
    return ImageTensor(alpha, m, data.reshape(alpha, m, m))


def reroll_features(f: RowVector, beta: int, n: int) -> FeatureTensor:
    """
    Inverse of feature unrolling.

    Args:
        f: Feature row of length β·n²
        beta: Output channels
        n: Output side

    Returns:
        FeatureTensor: The β×n×n feature map

    Raises:
        LengthMismatch: If len(f) != β·n²
    """
    data = f.data if isinstance(f, RowVector) else np.asarray(f, dtype=np.float64)
    if data.shape[0] != beta * n * n:
        raise LengthMismatch(
            f"Feature row of length {data.shape[0]} cannot reroll to {beta}x{n}x{n}",
            details={'length': int(data.shape[0]), 'beta': beta, 'n': n}
        )
    return FeatureTensor(beta, n, data.reshape(beta, n, n))
