"""
Global pytest configuration and fixtures.
"""
import logging
from pathlib import Path
from typing import Callable, List

import numpy as np
import pytest

from core.file_formats import write_image
from core.linalg import SeededRng
from modules.d2r.tensors import ImageTensor


@pytest.fixture(autouse=True)
def setup_test_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Automatically set up test environment variables."""
    monkeypatch.setenv('TESTING', 'true')
    monkeypatch.setenv('MOLE_LOG_LEVEL', 'WARNING')
    monkeypatch.setenv('MOLE_LOG_TO_FILE', 'false')
    monkeypatch.setenv('MOLE_WORKERS', '2')
    for name in ('MOLE_SEED', 'MOLE_COND_MAX', 'MOLE_MAX_CORE', 'MOLE_SSIM_WINDOW'):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def restore_root_logger():
    """Drop the handlers a test's logging configuration left on the root logger."""
    root = logging.getLogger()
    level = root.level
    yield
    for handler in root.handlers[:]:
        if not type(handler).__module__.startswith('_pytest'):
            root.removeHandler(handler)
            handler.close()
    root.setLevel(level)


@pytest.fixture
def rng() -> SeededRng:
    """Fixed-seed random stream."""
    return SeededRng(1234)


@pytest.fixture
def workspace(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Empty working directory; the CLI writes its files here."""
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _smooth_image(rng: np.random.Generator, alpha: int, m: int) -> np.ndarray:
    """Image with large smooth regions, close to natural photo statistics."""
    y, x = np.mgrid[0:m, 0:m] / max(m - 1, 1)
    channels = []
    for _ in range(alpha):
        fx, fy, phase = rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0, np.pi)
        base = 0.5 + 0.35 * np.sin(np.pi * (fx * x + fy * y) + phase)
        blob = np.exp(-((x - rng.uniform(0.2, 0.8)) ** 2 + (y - rng.uniform(0.2, 0.8)) ** 2) / 0.05)
        channels.append(np.clip(0.8 * base + 0.2 * blob, 0.0, 1.0))
    return np.stack(channels)


@pytest.fixture
def natural_images() -> Callable[[int, int, int], List[ImageTensor]]:
    """Factory for smooth, natural-looking test images in [0, 1]."""
    def make(count: int, alpha: int = 3, m: int = 32, seed: int = 7) -> List[ImageTensor]:
        gen = np.random.default_rng(seed)
        return [ImageTensor(alpha, m, _smooth_image(gen, alpha, m)) for _ in range(count)]
    return make


@pytest.fixture
def write_ppm(natural_images) -> Callable[[Path, int, int, int], Path]:
    """Write one natural image to disk as PGM (α=1) or PPM (α=3)."""
    def make(path: Path, alpha: int = 3, m: int = 8, seed: int = 7) -> Path:
        image = natural_images(1, alpha, m, seed)[0]
        write_image(path, image.data)
        return Path(path)
    return make
