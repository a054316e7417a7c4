"""
Log-domain probabilities.

Probabilities such as 2^(−9·10⁶) underflow any float, so bounds are carried
as base-2 logarithms and only converted to linear space when representable.
"""

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Optional

from typing_extensions import Self

from core.error_handler import DomainError

LINEAR_FLOOR_LOG2 = -1000.0
_LOG10_2 = math.log10(2.0)
_TOLERANCE = 1e-12


@total_ordering
@dataclass(frozen=True, eq=False)
class LogProb:
    """
    A probability stored as log2 of its value.

    Attributes:
        log2_value (float): ≤ 0, or -inf for probability zero
    """

    log2_value: float

    def __post_init__(self):
        value = float(self.log2_value)
        if math.isnan(value):
            raise DomainError("log2 probability is NaN")
        if value > _TOLERANCE:
            raise DomainError(f"log2 probability must be non-positive, got {value}")
        object.__setattr__(self, 'log2_value', min(value, 0.0))

    @classmethod
    def from_probability(cls, p: float) -> Self:
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"probability must lie in [0, 1], got {p}")
        return cls(-math.inf if p == 0.0 else math.log2(p))

    @classmethod
    def certain(cls) -> Self:
        return cls(0.0)

    @classmethod
    def impossible(cls) -> Self:
        return cls(-math.inf)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogProb):
            return NotImplemented
        return self.log2_value == other.log2_value

    def __lt__(self, other: 'LogProb') -> bool:
        if not isinstance(other, LogProb):
            return NotImplemented
        return self.log2_value < other.log2_value

    def __hash__(self) -> int:
        return hash(self.log2_value)

    def __mul__(self, other: 'LogProb') -> 'LogProb':
        """Joint probability of independent events."""
        return LogProb(self.log2_value + other.log2_value)

    @property
    def log10(self) -> float:
        return self.log2_value * _LOG10_2

    def linear(self) -> Optional[float]:
        """The probability itself, or None when it is below 2^−1000."""
        if self.log2_value < LINEAR_FLOOR_LOG2:
            return None
        return 2.0 ** self.log2_value

    def scientific(self, digits: int = 2) -> str:
        """
        Render as mantissa·10^exponent, e.g. '7.9e-90', without leaving log space.

        Args:
            digits: Significant digits of the mantissa
        """
        if self.log2_value == -math.inf:
            return '0'
        exponent = math.floor(self.log10)
        mantissa = round(10.0 ** (self.log10 - exponent), digits - 1)
        if mantissa >= 10.0:
            mantissa /= 10.0
            exponent += 1
        return f"{mantissa:.{digits - 1}f}e{exponent}"

    def __str__(self) -> str:
        return f"2^{self.log2_value:.6g} ({self.scientific()})"
