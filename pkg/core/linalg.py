"""
Dense Linear Algebra

This module provides the real matrix arithmetic every MoLe feature module is
built on: products with a fixed accumulation order, pivoted inversion with a
relative singularity test, exact 1-norm conditioning, sampling of
well-conditioned random cores and l2 normalization.

The Linear Algebra layer is responsible for:
1. Immutable Matrix and RowVector carriers (64-bit reals, finite entries)
2. Reproducible products (bit-identical run to run)
3. Inversion via LU with partial pivoting
4. Seeded randomness with a documented stream-splitting rule

Critical:
- Matrix and RowVector data is read-only after construction
- matmul sums each output element left to right over the inner index
- random_invertible never emits an entry with |x| < 0.05

Classes:
    Matrix: Dense row-major real matrix
    RowVector: Dense real row vector
    SeededRng: Deterministic PCG64 stream with spawnable children
"""

import logging
import warnings
from dataclasses import dataclass
from typing import List, Union

import numpy as np
from scipy import linalg as sla
from typing_extensions import Self

from .error_handler import (
    DimensionMismatch,
    LengthMismatch,
    NumericError,
    RetryExhausted,
    SingularMatrix,
    ValidationError,
    ZeroNorm,
)

logger = logging.getLogger(__name__)

ENTRY_GAP = 0.05
PIVOT_TOLERANCE = 1e-12
MAX_REJECTIONS = 100
DEFAULT_COND_MAX = 1e6


def _frozen(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0 or min(arr.shape) < 1:
        raise DimensionMismatch(f"{what} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{what} contains NaN or Inf entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Matrix:
    """
    Dense real matrix stored row-major as 64-bit floats.

    Attributes:
        data (np.ndarray): rows×cols read-only array
    """

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'data', _frozen(self.data, 2, "Matrix"))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @classmethod
    def identity(cls, n: int) -> Self:
        return cls(np.eye(n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Self:
        return cls(np.zeros((rows, cols)))

    def equals(self, other: 'Matrix') -> bool:
        """Bitwise equality of shape and entries."""
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))


@dataclass(frozen=True)
class RowVector:
    """
    Dense real row vector.

    Attributes:
        data (np.ndarray): read-only 1-D array
    """

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'data', _frozen(self.data, 1, "RowVector"))

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def len(self) -> int:
        return self.data.shape[0]


class SeededRng:
    """
    Deterministic random stream backed by numpy's PCG64.

    Identical seeds yield identical streams. ``spawn`` derives independent
    child streams through ``numpy.random.SeedSequence`` spawning; each child
    is itself a SeededRng whose seed is the first 64-bit word of its spawned
    sequence state.

    Attributes:
        seed (int): Unsigned 64-bit seed
        generator (np.random.Generator): Underlying generator (stateful)
    """

    def __init__(self, seed: int):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise ValidationError("seed must be an integer")
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self._sequence = np.random.SeedSequence(seed)
        self.generator = np.random.Generator(np.random.PCG64(self._sequence))
        self._spawned = 0

    def spawn(self, count: int) -> List['SeededRng']:
        """
        Derive ``count`` child streams.

        Successive calls continue the spawn sequence, so children from the
        second call differ from those of the first.
        """
        if count < 0:
            raise ValidationError("spawn count must be non-negative")
        children = []
        for child in self._sequence.spawn(count):
            word = int(child.generate_state(1, dtype=np.uint64)[0])
            children.append(SeededRng(word))
        self._spawned += count
        return children

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self.generator.uniform(low, high, size)

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None):
        return self.generator.normal(loc, scale, size)

    def integers(self, low: int, high: int, size=None):
        return self.generator.integers(low, high, size=size)

    def __repr__(self) -> str:
        return f"SeededRng(spawned={self._spawned})"


def _as_array(a: Union[Matrix, RowVector, np.ndarray]) -> np.ndarray:
    if isinstance(a, (Matrix, RowVector)):
        return a.data
    return np.asarray(a, dtype=np.float64)


def accumulate_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Product of two 2-D arrays summed in a fixed left-to-right order.

    ``out[i, j] = (((0 + a[i,0]b[0,j]) + a[i,1]b[1,j]) + ...)`` which is the
    naive triple-loop result bit for bit, independent of BLAS threading.
    """
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(
            f"Cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}",
            details={'left': list(a.shape), 'right': list(b.shape)}
        )
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.float64)
    for k in range(a.shape[1]):
        out += np.multiply.outer(a[:, k], b[k, :])
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """
    Multiply two matrices.

    Args:
        a: Left operand (r×k)
        b: Right operand (k×c)

    Returns:
        Matrix: The r×c product

    Raises:
        DimensionMismatch: If a.cols != b.rows
    """
    return Matrix(accumulate_product(_as_array(a), _as_array(b)))


def vecmat(v: RowVector, a: Matrix) -> RowVector:
    """Row vector times matrix through the same accumulation as matmul."""
    vec = _as_array(v)
    if vec.shape[0] != a.rows:
        raise LengthMismatch(f"Row vector of length {vec.shape[0]} cannot multiply a {a.rows}x{a.cols} matrix")
    return RowVector(accumulate_product(vec[np.newaxis, :], a.data)[0])


def _pivot_rows(piv: np.ndarray) -> np.ndarray:
    """Original row index that ends up at each position after LAPACK swaps."""
    order = np.arange(piv.shape[0])
    for i, p in enumerate(piv):
        if p != i:
            order[i], order[p] = order[p], order[i]
    return order


def lu_factor_checked(a: np.ndarray):
    """
    LU-factorize with partial pivoting and reject numerically singular input.

    A pivot is singular when |U_kk| < 1e-12 times the largest magnitude in
    the original row that was pivoted into position k.

    Returns:
        tuple: (lu, piv) as returned by scipy.linalg.lu_factor

    Raises:
        DimensionMismatch: If a is not square
        SingularMatrix: On a vanishing pivot
    """
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"Expected a square matrix, got shape {a.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    row_scale = np.max(np.abs(a), axis=1)[_pivot_rows(piv)]
    pivots = np.abs(np.diag(lu))
    bad = np.nonzero((pivots < PIVOT_TOLERANCE * row_scale) | (row_scale == 0))[0]
    if bad.size:
        raise SingularMatrix(
            f"Matrix is singular to working precision (pivot {int(bad[0])})",
            details={'size': int(a.shape[0]), 'pivot_index': int(bad[0])}
        )
    return lu, piv


def invert(a: Matrix) -> Matrix:
    """
    Invert a square matrix by Gaussian elimination with partial pivoting.

    Args:
        a: Square matrix

    Returns:
        Matrix: a⁻¹

    Raises:
        DimensionMismatch: If a is not square
        SingularMatrix: If a pivot vanishes relative to its row scale
    """
    arr = _as_array(a)
    factor = lu_factor_checked(arr)
    inverse = sla.lu_solve(factor, np.eye(arr.shape[0]), check_finite=False)
    if not np.all(np.isfinite(inverse)):
        raise SingularMatrix("Inverse overflowed; matrix is numerically singular")
    return Matrix(inverse)


def condition_estimate(a: Matrix) -> float:
    """
    1-norm condition number ‖A‖₁·‖A⁻¹‖₁.

    Computed from the explicit inverse, so it is exact rather than a
    LAPACK-style lower estimate.

    Raises:
        SingularMatrix: Propagated from invert
    """
    arr = _as_array(a)
    inverse = invert(arr).data
    return float(np.linalg.norm(arr, 1) * np.linalg.norm(inverse, 1))


def random_entries(rng: SeededRng, shape) -> np.ndarray:
    """Entries uniform on [−1,−0.05]∪[0.05,1], the distribution of every core."""
    magnitudes = rng.uniform(ENTRY_GAP, 1.0, size=shape)
    signs = np.where(rng.integers(0, 2, size=shape) == 1, 1.0, -1.0)
    return magnitudes * signs


def random_invertible(q: int, rng: SeededRng, cond_max: float = DEFAULT_COND_MAX) -> Matrix:
    """
    Sample a q×q matrix with entries uniform on [−1,−0.05]∪[0.05,1].

    Candidates whose 1-norm condition number exceeds ``cond_max`` (or that
    are singular) are rejected and redrawn from the same stream.

    Args:
        q: Matrix side
        rng: Random stream
        cond_max: Conditioning gate

    Returns:
        Matrix: An accepted candidate

    Raises:
        ValidationError: If q < 1 or cond_max <= 1
        RetryExhausted: After 100 rejections
    """
    if q < 1:
        raise ValidationError(f"q must be >= 1, got {q}")
    if not cond_max > 1:
        raise ValidationError(f"cond_max must be > 1, got {cond_max}")

    for attempt in range(MAX_REJECTIONS):
        candidate = random_entries(rng, (q, q))
        try:
            cond = condition_estimate(candidate)
        except SingularMatrix:
            cond = np.inf
        if cond <= cond_max:
            logger.debug("Accepted random core", extra={'details': {'q': q, 'attempts': attempt + 1}})
            return Matrix(candidate)
        logger.debug("Rejected random core", extra={'details': {'q': q, 'attempt': attempt + 1}})

    raise RetryExhausted(
        f"No {q}x{q} core with condition <= {cond_max:g} after {MAX_REJECTIONS} rejections",
        details={'q': q, 'cond_max': cond_max}
    )


def unit_l2_normalize(a: Union[Matrix, RowVector], mode: str = 'whole'):
    """
    Scale to unit l2 norm.

    Args:
        a: Matrix or RowVector
        mode: 'whole' (Frobenius norm of the object) or 'columns' (each
            column of a Matrix separately)

    Returns:
        Same type as ``a``

    Raises:
        ZeroNorm: If the object, or any column in column mode, has norm 0
        ValidationError: On an unknown mode
    """
    arr = _as_array(a)
    if mode == 'whole':
        norm = float(np.sqrt(np.sum(arr * arr)))
        if norm == 0.0:
            raise ZeroNorm("Cannot normalize an all-zero object")
        result = arr / norm
    elif mode == 'columns':
        if arr.ndim != 2:
            raise ValidationError("Column mode requires a Matrix")
        norms = np.sqrt(np.sum(arr * arr, axis=0))
        if np.any(norms == 0.0):
            raise ZeroNorm("Cannot normalize a zero column",
                           details={'column': int(np.nonzero(norms == 0.0)[0][0])})
        result = arr / norms[np.newaxis, :]
    else:
        raise ValidationError(f"Unknown normalization mode {mode!r}")

    if isinstance(a, RowVector) or (not isinstance(a, Matrix) and arr.ndim == 1):
        return RowVector(result)
    return Matrix(result)
