"""
path: modules/metrics/ssim.py
purpose: Structural similarity over uniform non-overlapping windows
critical:
- Window statistics use population (biased) variance and covariance
- Trailing rows/columns that do not fill a window are ignored
"""

from dataclasses import dataclass

import numpy as np

from core.error_handler import GeometryMismatch, ValidationError
from modules.d2r.tensors import ImageTensor

K1 = 0.01
K2 = 0.03


@dataclass(frozen=True)
class SsimParams:
    """
    SSIM configuration.

    Attributes:
        window (int): Side of the square window, at least 2
        dynamic_range (float): L, the value span of the images
    """

    window: int = 8
    dynamic_range: float = 1.0

    def __post_init__(self):
        if self.window < 2:
            raise ValidationError(f"SSIM window must be >= 2, got {self.window}")
        if self.dynamic_range <= 0:
            raise ValidationError("dynamic_range must be positive")

    @property
    def c1(self) -> float:
        return (K1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (K2 * self.dynamic_range) ** 2


def _windows(data: np.ndarray, window: int) -> np.ndarray:
    """Reshape (α, m, m) to (α·blocks, window²)."""
    alpha, m, _ = data.shape
    blocks = m // window
    cropped = data[:, :blocks * window, :blocks * window]
    tiles = cropped.reshape(alpha, blocks, window, blocks, window).transpose(0, 1, 3, 2, 4)
    return tiles.reshape(-1, window * window)


def ssim(a: ImageTensor, b: ImageTensor, params: SsimParams = SsimParams()) -> float:
    """
    Mean SSIM over every channel and window position.

    Raises:
        GeometryMismatch: If the images differ in shape
        ValidationError: If the window is larger than the image
    """
    if (a.alpha, a.m) != (b.alpha, b.m):
        raise GeometryMismatch(
            f"Cannot compare {a.alpha}x{a.m}x{a.m} with {b.alpha}x{b.m}x{b.m}"
        )
    if params.window > a.m:
        raise ValidationError(f"SSIM window {params.window} exceeds image side {a.m}")

    x = _windows(a.data, params.window)
    y = _windows(b.data, params.window)
    mu_x = x.mean(axis=1)
    mu_y = y.mean(axis=1)
    var_x = x.var(axis=1)
    var_y = y.var(axis=1)
    cov = ((x - mu_x[:, None]) * (y - mu_y[:, None])).mean(axis=1)

    c1, c2 = params.c1, params.c2
    index = ((2 * mu_x * mu_y + c1) * (2 * cov + c2)) / ((mu_x ** 2 + mu_y ** 2 + c1) * (var_x + var_y + c2))
    return float(np.clip(index.mean(), -1.0, 1.0))
