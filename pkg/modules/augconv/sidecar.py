"""
path: modules/augconv/sidecar.py
purpose: Stores the Aug-Conv layer as a MOLEMAT1 payload plus a JSON geometry sidecar
critical:
- The sidecar holds exactly alpha, m, beta, n, p, padding and permuted
- No secret field (core, permutation, seed) is ever written here
"""

import logging
from pathlib import Path
from typing import Union

from core.error_handler import FileFormatError, GeometryMismatch
from core.file_formats import read_json, read_matrix, write_json, write_matrix

from .layer import AugConvMatrix

logger = logging.getLogger(__name__)

SIDECAR_KEYS = frozenset({'alpha', 'm', 'beta', 'n', 'p', 'padding', 'permuted'})


def sidecar_path(matrix_path: Union[str, Path]) -> Path:
    matrix_path = Path(matrix_path)
    return matrix_path.with_name(matrix_path.name + '.json')


def save_augconv(path: Union[str, Path], ac: AugConvMatrix) -> Path:
    """
    Write the layer matrix and its sidecar.

    Returns:
        Path: The sidecar path
    """
    write_matrix(path, ac.matrix)
    meta = ac.geometry()
    target = sidecar_path(path)
    write_json(target, meta)
    logger.info("Saved Aug-Conv layer", extra={'details': {'path': str(path)}})
    return target


def load_augconv(path: Union[str, Path]) -> AugConvMatrix:
    """
    Read a layer written by save_augconv.

    Raises:
        FileFormatError: On a missing file or an unexpected sidecar schema
        GeometryMismatch: If sidecar and matrix shape disagree
    """
    meta = read_json(sidecar_path(path))
    if set(meta) != SIDECAR_KEYS:
        raise FileFormatError(
            f"Sidecar fields {sorted(meta)} do not match the expected {sorted(SIDECAR_KEYS)}"
        )
    matrix = read_matrix(path)
    try:
        return AugConvMatrix(
            matrix, int(meta['alpha']), int(meta['m']), int(meta['beta']), int(meta['n']),
            int(meta['p']), meta['padding'], bool(meta['permuted'])
        )
    except GeometryMismatch:
        raise
    except (TypeError, ValueError) as e:
        raise FileFormatError(f"Malformed sidecar for {path}: {e}")
