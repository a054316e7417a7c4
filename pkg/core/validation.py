"""
path: core/validation.py
purpose: Provides input and geometry validation utilities for the CLI and library entry points
critical:
- Must validate all user inputs before any computation
- Must raise ValidationError (exit code 2) on bad input
- Must never echo secret material in error messages
"""

import logging
import math
import re
from typing import List, Union

from .error_handler import ValidationError

logger = logging.getLogger(__name__)

PADDING_MODES = ('valid', 'same')


class GeometryValidator:
    """
    Validates numeric flags and geometry parameters.

    This class provides:
    1. Positive-integer and range validation
    2. Open-interval probability validation (σ)
    3. Padding mode validation
    4. Parsing of comma-separated κ and σ lists
    """

    PATTERNS = {
        'int_list': r'^\s*\d+(\s*,\s*\d+)*\s*$',
        'float_list': r'^\s*[\d.eE+\-]+(\s*,\s*[\d.eE+\-]+)*\s*$',
    }

    @classmethod
    def validate_positive_int(cls, value: Union[str, int], field: str) -> int:
        """
        Validate a strictly positive integer.

        Args:
            value: The value to validate
            field: Field name for error messages

        Returns:
            int: The validated value

        Raises:
            ValidationError: If value is not an integer ≥ 1
        """
        if isinstance(value, bool):
            raise ValidationError(f"Invalid {field} value")
        try:
            number = int(value)
        except (TypeError, ValueError):
            raise ValidationError(f"Invalid {field} value: {value!r}")
        if isinstance(value, float) and value != number:
            raise ValidationError(f"{field} must be an integer")
        if number < 1:
            raise ValidationError(f"{field} must be a positive integer, got {number}")
        return number

    @classmethod
    def validate_range(cls, value: Union[int, float], min_val: Union[int, float],
                       max_val: Union[int, float], field: str) -> Union[int, float]:
        """
        Validate a numeric value within a closed range.

        Args:
            value: The value to validate
            min_val: Minimum allowed value
            max_val: Maximum allowed value
            field: Field name for error messages

        Returns:
            Union[int, float]: The validated value

        Raises:
            ValidationError: If value is outside allowed range
        """
        try:
            value = float(value) if isinstance(value, str) else value
            if not min_val <= value <= max_val:
                raise ValidationError(
                    f"{field} must be between {min_val} and {max_val}"
                )
            return value
        except (TypeError, ValueError):
            raise ValidationError(f"Invalid {field.lower()} value")

    @classmethod
    def validate_open_unit(cls, value: Union[str, float], field: str = "sigma") -> float:
        """
        Validate a real strictly inside (0, 1).

        Raises:
            ValidationError: If value is not in the open unit interval
        """
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"Invalid {field} value: {value!r}")
        if not math.isfinite(number) or not 0.0 < number < 1.0:
            raise ValidationError(f"{field} must lie strictly between 0 and 1, got {number}")
        return number

    @classmethod
    def validate_padding(cls, padding: str) -> str:
        """
        Validate a padding mode name.

        Returns:
            str: 'valid' or 'same'
        """
        name = (padding or '').strip().lower()
        if name not in PADDING_MODES:
            raise ValidationError(f"padding must be one of {', '.join(PADDING_MODES)}, got {padding!r}")
        return name

    @classmethod
    def parse_int_list(cls, text: str, field: str) -> List[int]:
        """
        Parse a comma-separated list of positive integers (e.g. a κ ladder).

        Raises:
            ValidationError: On empty or malformed input
        """
        if not text or not re.match(cls.PATTERNS['int_list'], text):
            raise ValidationError(f"{field} must be a comma-separated list of positive integers")
        return [cls.validate_positive_int(part, field) for part in text.split(',')]

    @classmethod
    def parse_float_list(cls, text: str, field: str) -> List[float]:
        """
        Parse a comma-separated list of non-negative reals (e.g. σ values).

        Raises:
            ValidationError: On empty or malformed input
        """
        if not text or not re.match(cls.PATTERNS['float_list'], text):
            raise ValidationError(f"{field} must be a comma-separated list of numbers")
        values = []
        for part in text.split(','):
            try:
                number = float(part)
            except ValueError:
                raise ValidationError(f"Invalid {field} entry: {part.strip()!r}")
            if not math.isfinite(number) or number < 0:
                raise ValidationError(f"{field} entries must be finite and non-negative")
            values.append(number)
        return values

    @classmethod
    def validate_seed(cls, value: Union[str, int]) -> int:
        """
        Validate an unsigned 64-bit seed.

        Raises:
            ValidationError: If value is negative or does not fit in 64 bits
        """
        try:
            seed = int(value)
        except (TypeError, ValueError):
            raise ValidationError("seed must be an integer")
        if not 0 <= seed < 2 ** 64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        return seed
