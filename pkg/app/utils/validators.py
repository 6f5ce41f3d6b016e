"""
Common validators for command arguments and file fields.
"""

import re
from fractions import Fraction
from typing import Any, Iterable


RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


class FieldValidators:
    """Collection of reusable field validators."""

    @staticmethod
    def validate_positive_int(value: int) -> bool:
        """Validate value is positive integer."""
        return isinstance(value, int) and not isinstance(value, bool) and value > 0

    @staticmethod
    def validate_non_negative_int(value: int) -> bool:
        """Validate value is non-negative integer."""
        return isinstance(value, int) and not isinstance(value, bool) and value >= 0

    @staticmethod
    def validate_rational_text(value: str) -> bool:
        """Validate exact rational literal ``p`` or ``p/q`` with q > 0."""
        if not isinstance(value, str) or not RATIONAL_PATTERN.match(value.strip()):
            return False
        _, _, denominator = value.strip().partition("/")
        return not denominator or int(denominator) > 0

    @staticmethod
    def validate_positive_rational(value: Fraction) -> bool:
        return isinstance(value, Fraction) and value > 0

    @staticmethod
    def validate_word_over(word: Iterable[str], symbols: Iterable[str]) -> bool:
        allowed = set(symbols)
        return all(symbol in allowed for symbol in word)

    @staticmethod
    def validate_grid(width: Fraction, h: Fraction) -> bool:
        """Grid width h must be positive and divide the domain width."""
        if h <= 0:
            return False
        return (width / h).denominator == 1

    @staticmethod
    def validate_choice(value: Any, allowed_values: Iterable[Any]) -> bool:
        """Validate value is in allowed choices."""
        return value in set(allowed_values)
