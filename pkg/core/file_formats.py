"""
path: core/file_formats.py
purpose: Reads and writes every binary and image artifact exchanged between provider and developer
critical:
- All numerics are 64-bit little-endian reals behind an 8-byte magic
- Writes are atomic (temp file, then replace)
- Negative zeros are written as +0.0 so equal matrices give identical bytes
- Truncated or foreign files raise FileFormatError
"""

import json
import logging
import os
import struct
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from PIL import Image

from .error_handler import FileFormatError, GeometryMismatch, ValidationError
from .linalg import Matrix

logger = logging.getLogger(__name__)

MAGIC_MATRIX = b'MOLEMAT1'
MAGIC_TENSOR = b'MOLETEN1'
MAGIC_KERNEL = b'MOLEKER1'
MAGIC_ROWS = b'MOLEROW1'
MAGIC_PAIRS = b'MOLEPAR1'

_REAL = np.dtype('<f8')
_IMAGE_SUFFIXES = ('.pgm', '.ppm', '.pnm')

PathLike = Union[str, Path]


def _payload(values: np.ndarray) -> bytes:
    return (np.ascontiguousarray(values, dtype=np.float64) + 0.0).astype(_REAL).tobytes()


def _atomic_write(path: PathLike, blob: bytes) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = f"{path}.tmp"
    with open(temp_file, 'wb') as f:
        f.write(blob)
    os.replace(temp_file, path)
    logger.debug("Wrote file", extra={'details': {'path': str(path), 'bytes': len(blob)}})


def _read_all(path: PathLike) -> bytes:
    try:
        with open(path, 'rb') as f:
            return f.read()
    except FileNotFoundError:
        raise FileFormatError(f"File not found: {path}")
    except IsADirectoryError:
        raise FileFormatError(f"Expected a file, got a directory: {path}")


class _Cursor:
    """Sequential reader over a byte buffer with truncation checks."""

    def __init__(self, blob: bytes, path: PathLike):
        self.blob = blob
        self.offset = 0
        self.path = path

    def magic(self, expected: bytes) -> None:
        found = self.take(8)
        if found != expected:
            raise FileFormatError(
                f"{self.path}: bad magic {found!r}, expected {expected.decode()}"
            )

    def u32(self, count: int = 1) -> Tuple[int, ...]:
        return struct.unpack(f'<{count}I', self.take(4 * count))

    def reals(self, count: int) -> np.ndarray:
        return np.frombuffer(self.take(8 * count), dtype=_REAL).astype(np.float64)

    def take(self, size: int) -> bytes:
        end = self.offset + size
        if end > len(self.blob):
            raise FileFormatError(f"{self.path}: truncated file (needed {end} bytes, have {len(self.blob)})")
        chunk = self.blob[self.offset:end]
        self.offset = end
        return chunk

    @property
    def exhausted(self) -> bool:
        return self.offset == len(self.blob)

    def finish(self) -> None:
        if not self.exhausted:
            raise FileFormatError(f"{self.path}: {len(self.blob) - self.offset} trailing bytes")


# Matrices

def write_matrix(path: PathLike, matrix: Union[Matrix, np.ndarray]) -> None:
    """Write a MOLEMAT1 file: magic, u32 rows, u32 cols, row-major reals."""
    data = matrix.data if isinstance(matrix, Matrix) else np.asarray(matrix, dtype=np.float64)
    if data.ndim != 2:
        raise ValidationError(f"Matrix payload must be 2-D, got shape {data.shape}")
    rows, cols = data.shape
    _atomic_write(path, MAGIC_MATRIX + struct.pack('<2I', rows, cols) + _payload(data))


def read_matrix(path: PathLike) -> Matrix:
    """Read a MOLEMAT1 file."""
    cursor = _Cursor(_read_all(path), path)
    cursor.magic(MAGIC_MATRIX)
    rows, cols = cursor.u32(2)
    if rows == 0 or cols == 0:
        raise FileFormatError(f"{path}: empty matrix ({rows}x{cols})")
    data = cursor.reals(rows * cols).reshape(rows, cols)
    cursor.finish()
    return Matrix(data)


# Tensors (images and feature maps)

def write_tensors(path: PathLike, tensors: List[np.ndarray]) -> None:
    """
    Write a MOLETEN1 sequence.

    Each record is: magic, u32 channels, u32 side, then channels·side²
    reals channel-major, row-major. A single tensor file is a sequence of
    one record; an empty sequence is an empty file.
    """
    parts = []
    for index, tensor in enumerate(tensors):
        arr = np.asarray(tensor, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValidationError(f"Tensor {index} must have shape (channels, side, side), got {arr.shape}")
        parts.append(MAGIC_TENSOR + struct.pack('<2I', arr.shape[0], arr.shape[1]) + _payload(arr))
    _atomic_write(path, b''.join(parts))


def read_tensors(path: PathLike) -> List[np.ndarray]:
    """Read every record of a MOLETEN1 sequence."""
    cursor = _Cursor(_read_all(path), path)
    tensors = []
    while not cursor.exhausted:
        cursor.magic(MAGIC_TENSOR)
        channels, side = cursor.u32(2)
        if channels == 0 or side == 0:
            raise FileFormatError(f"{path}: empty tensor record {len(tensors)}")
        tensors.append(cursor.reals(channels * side * side).reshape(channels, side, side))
    return tensors


# Kernels

def write_kernels(path: PathLike, weights: np.ndarray) -> None:
    """Write a MOLEKER1 file: magic, u32 α, u32 β, u32 p, then α·β·p² reals."""
    arr = np.asarray(weights, dtype=np.float64)
    if arr.ndim != 4 or arr.shape[2] != arr.shape[3]:
        raise ValidationError(f"Kernel weights must have shape (alpha, beta, p, p), got {arr.shape}")
    alpha, beta, p, _ = arr.shape
    _atomic_write(path, MAGIC_KERNEL + struct.pack('<3I', alpha, beta, p) + _payload(arr))


def read_kernels(path: PathLike) -> np.ndarray:
    """Read a MOLEKER1 file into an (α, β, p, p) array."""
    cursor = _Cursor(_read_all(path), path)
    cursor.magic(MAGIC_KERNEL)
    alpha, beta, p = cursor.u32(3)
    if 0 in (alpha, beta, p):
        raise FileFormatError(f"{path}: empty kernel set")
    weights = cursor.reals(alpha * beta * p * p).reshape(alpha, beta, p, p)
    cursor.finish()
    return weights


# Morphed datasets and D-T pairs

def write_rows(path: PathLike, rows: np.ndarray, width: int) -> None:
    """Write a MOLEROW1 file: magic, u32 count, u32 width, then count rows."""
    arr = np.asarray(rows, dtype=np.float64).reshape(-1, width)
    _atomic_write(path, MAGIC_ROWS + struct.pack('<2I', arr.shape[0], width) + _payload(arr))


def read_rows(path: PathLike) -> np.ndarray:
    """Read a MOLEROW1 file into a (count, width) array."""
    cursor = _Cursor(_read_all(path), path)
    cursor.magic(MAGIC_ROWS)
    count, width = cursor.u32(2)
    if width == 0:
        raise FileFormatError(f"{path}: zero row width")
    rows = cursor.reals(count * width).reshape(count, width)
    cursor.finish()
    return rows


def write_pairs(path: PathLike, originals: np.ndarray, morphed: np.ndarray) -> None:
    """Write a MOLEPAR1 file: magic, u32 count, u32 width, then D row and T row per pair."""
    d = np.asarray(originals, dtype=np.float64)
    t = np.asarray(morphed, dtype=np.float64)
    if d.shape != t.shape or d.ndim != 2:
        raise GeometryMismatch(f"Pair arrays must share a (count, width) shape, got {d.shape} and {t.shape}")
    interleaved = np.stack([d, t], axis=1)
    _atomic_write(path, MAGIC_PAIRS + struct.pack('<2I', d.shape[0], d.shape[1]) + _payload(interleaved))


def read_pairs(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    """Read a MOLEPAR1 file into (originals, morphed) arrays of shape (count, width)."""
    cursor = _Cursor(_read_all(path), path)
    cursor.magic(MAGIC_PAIRS)
    count, width = cursor.u32(2)
    if width == 0:
        raise FileFormatError(f"{path}: zero pair width")
    data = cursor.reals(2 * count * width).reshape(count, 2, width)
    cursor.finish()
    return data[:, 0, :].copy(), data[:, 1, :].copy()


# Images

def is_netpbm(path: PathLike) -> bool:
    """True for PGM/PPM files, by suffix or by their P5/P6 signature."""
    if Path(path).suffix.lower() in _IMAGE_SUFFIXES:
        return True
    try:
        with open(path, 'rb') as f:
            return f.read(2) in (b'P5', b'P6')
    except OSError:
        return False


def read_image(path: PathLike) -> np.ndarray:
    """
    Read a PGM (P5) or PPM (P6) image as a (channels, m, m) array in [0, 1].

    8-bit images are divided by 255 and 16-bit images by 65535; Pillow
    rescales files whose maxval is not a full-range value.

    Raises:
        FileFormatError: If Pillow cannot decode the file
        GeometryMismatch: If the image is not square
    """
    try:
        with Image.open(path) as img:
            img.load()
            mode = img.mode
            pixels = np.asarray(img)
    except FileNotFoundError:
        raise FileFormatError(f"Image not found: {path}")
    except (OSError, SyntaxError, ValueError) as e:
        raise FileFormatError(f"Cannot decode image {path}: {e}")

    if mode in ('L', 'RGB'):
        scale = 255.0
    elif mode.startswith('I'):
        scale = 65535.0
    else:
        raise FileFormatError(f"{path}: unsupported image mode {mode}")

    arr = pixels.astype(np.float64) / scale
    arr = arr[np.newaxis, :, :] if arr.ndim == 2 else np.transpose(arr, (2, 0, 1))
    if arr.shape[1] != arr.shape[2]:
        raise GeometryMismatch(f"{path}: image must be square, got {arr.shape[1]}x{arr.shape[2]}")
    return np.ascontiguousarray(arr)


def write_image(path: PathLike, tensor: np.ndarray) -> None:
    """
    Write a (1, m, m) tensor as PGM or a (3, m, m) tensor as PPM.

    Values are clamped to [0, 1] and quantized to 8 bits.
    """
    arr = np.asarray(tensor, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[0] not in (1, 3):
        raise ValidationError(f"Only 1- or 3-channel tensors can be written as images, got {arr.shape}")
    pixels = np.rint(np.clip(arr, 0.0, 1.0) * 255.0).astype(np.uint8)
    if arr.shape[0] == 1:
        img = Image.fromarray(pixels[0])
    else:
        img = Image.fromarray(np.ascontiguousarray(np.transpose(pixels, (1, 2, 0))))
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    img.save(path, format='PPM')


def read_image_or_tensor(path: PathLike) -> np.ndarray:
    """Read one input datum: a PGM/PPM image or the first MOLETEN1 record."""
    if is_netpbm(path):
        return read_image(path)
    tensors = read_tensors(path)
    if not tensors:
        raise FileFormatError(f"{path}: no tensor records")
    return tensors[0]


# JSON

def write_json(path: PathLike, data: dict) -> None:
    """Write a JSON object atomically with sorted keys."""
    blob = (json.dumps(data, indent=2, sort_keys=True) + '\n').encode('utf-8')
    _atomic_write(path, blob)


def read_json(path: PathLike) -> dict:
    """Read a JSON object."""
    try:
        data = json.loads(_read_all(path).decode('utf-8'))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FileFormatError(f"Invalid JSON in {path}: {e}")
    if not isinstance(data, dict):
        raise FileFormatError(f"Expected a JSON object in {path}")
    return data
