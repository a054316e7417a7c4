"""
path: modules/morphing/secret_store.py
purpose: Persists the data provider's secret (core M′, κ, seed, channel permutation)
critical:
- The secret JSON and its M′ matrix file are the security root of the scheme
- Nothing in this module may be imported by developer-side commands
- Secret fields are never logged
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from config.core.base_config import VersionedDocument
from core.error_handler import ConfigurationError, GeometryMismatch
from core.file_formats import read_matrix, write_matrix

from .core import MorphCore

logger = logging.getLogger(__name__)

SECRET_VERSION = 1
SECRET_KEYS = ('alpha', 'm', 'kappa', 'q', 'seed', 'mprime_file', 'permutation')
SECURITY_WARNING = (
    "The secret file and its core matrix are the security root of this "
    "deployment; never share them with the model developer."
)


@dataclass(frozen=True)
class MorphSecret:
    """
    Everything the data provider must keep private.

    Attributes:
        core (MorphCore): M′, κ and the cached inverse
        seed (int): Seed the core (and the permutation) was drawn from
        alpha (int): Input channels
        m (int): Input side
        permutation (tuple, optional): Channel order, set once the Aug-Conv layer is fixed
    """

    core: MorphCore
    seed: int
    alpha: int
    m: int
    permutation: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        self.core.check_geometry(self.alpha, self.m)
        if self.permutation is not None:
            order = tuple(int(v) for v in self.permutation)
            if sorted(order) != list(range(len(order))):
                raise ConfigurationError("Stored channel permutation is not a bijection")
            object.__setattr__(self, 'permutation', order)

    def with_permutation(self, order: List[int]) -> 'MorphSecret':
        return MorphSecret(self.core, self.seed, self.alpha, self.m, tuple(order))

    def __repr__(self) -> str:
        return f"MorphSecret(alpha={self.alpha}, m={self.m}, kappa={self.core.kappa}, q={self.core.q})"


def _mprime_path(secret_path: Path) -> Path:
    return secret_path.with_name(f"{secret_path.stem}.mprime.mat")


def save_secret(path: Union[str, Path], secret: MorphSecret) -> Path:
    """
    Write the secret JSON document and its MOLEMAT1 core file.

    Args:
        path: Secret JSON path; the core is written next to it
        secret: The secret to store

    Returns:
        Path: Where M′ was written
    """
    path = Path(path)
    mprime_path = _mprime_path(path)
    write_matrix(mprime_path, secret.core.mprime)
    VersionedDocument(path, SECRET_KEYS, version=SECRET_VERSION).save({
        'alpha': secret.alpha,
        'm': secret.m,
        'kappa': secret.core.kappa,
        'q': secret.core.q,
        'seed': secret.seed,
        'mprime_file': mprime_path.name,
        'permutation': list(secret.permutation) if secret.permutation is not None else None,
    })
    logger.warning(SECURITY_WARNING)
    return mprime_path


def load_secret(path: Union[str, Path]) -> MorphSecret:
    """
    Read a secret document and its core matrix.

    Raises:
        FileFormatError: If either file is missing or malformed
        GeometryMismatch: If the stored geometry and core disagree
    """
    path = Path(path)
    data = VersionedDocument(path, SECRET_KEYS, version=SECRET_VERSION).load()
    mprime = read_matrix(path.parent / data['mprime_file'])
    if mprime.shape != (data['q'], data['q']):
        raise GeometryMismatch(f"Core file holds a {mprime.rows}x{mprime.cols} matrix, expected q={data['q']}")
    core = MorphCore(int(data['q']), mprime, int(data['kappa']))
    logger.debug("Loaded secret", extra={'details': {'alpha': data['alpha'], 'm': data['m'], 'kappa': data['kappa']}})
    return MorphSecret(core, int(data['seed']), int(data['alpha']), int(data['m']), data['permutation'])
