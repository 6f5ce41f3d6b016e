"""
Parsers for command-line literals: rationals, grids, limit kinds and words.
"""

from fractions import Fraction
from typing import NamedTuple, Optional

from app.exceptions import CommandError
from app.schemas.symbolic import Word, to_word
from app.utils.validators import FieldValidators

LIMIT_KINDS = ("alpha", "omega", "gamma")
DIRECTIONS = ("forward", "backward", "two_sided")


class Grid(NamedTuple):
    h: Fraction
    fatten: Fraction

    @property
    def text(self) -> str:
        return f"{self.h}:{self.fatten}"


class CommandParser:
    """Parse the literal arguments shared by several subcommands."""

    @staticmethod
    def parse_rational(text: str, name: str = "value") -> Fraction:
        if not FieldValidators.validate_rational_text(text):
            raise CommandError(f"{name} must be an exact rational p or p/q, got {text!r}")
        return Fraction(text.strip())

    @staticmethod
    def parse_positive_rational(text: str, name: str = "value") -> Fraction:
        value = CommandParser.parse_rational(text, name)
        if not FieldValidators.validate_positive_rational(value):
            raise CommandError(f"{name} must be positive, got {text!r}")
        return value

    @staticmethod
    def parse_grid(text: str) -> Grid:
        """
        ``h`` or ``h:fatten``. The fattening defaults to h/2.

        Examples: ``1/128``, ``1/128:1/256``.
        """
        h_text, _, fatten_text = text.partition(":")
        h = CommandParser.parse_positive_rational(h_text, "grid width")
        if not fatten_text:
            return Grid(h, h / 2)
        fatten = CommandParser.parse_rational(fatten_text, "fattening")
        if fatten < 0:
            raise CommandError(f"fattening must be non-negative, got {fatten_text!r}")
        return Grid(h, fatten)

    @staticmethod
    def parse_kinds(text: str) -> tuple[str, ...]:
        kinds = tuple(part.strip() for part in text.split(",") if part.strip())
        unknown = [k for k in kinds if not FieldValidators.validate_choice(k, LIMIT_KINDS)]
        if unknown or not kinds:
            raise CommandError(f"limit kinds must be among {', '.join(LIMIT_KINDS)}, got {text!r}")
        return kinds

    @staticmethod
    def parse_direction(text: str) -> str:
        direction = text.strip().replace("-", "_")
        if not FieldValidators.validate_choice(direction, DIRECTIONS):
            raise CommandError(f"direction must be one of {', '.join(DIRECTIONS)}, got {text!r}")
        return direction

    @staticmethod
    def parse_word(text: str) -> Word:
        word = to_word(text)
        if not word:
            raise CommandError("empty word")
        return word

    @staticmethod
    def parse_windows(text: str) -> tuple[Word, ...]:
        """Space-separated words of one common length, e.g. ``00 01 10``."""
        words = tuple(to_word(part) for part in text.split())
        if not words:
            raise CommandError("no windows given")
        if len({len(w) for w in words}) != 1:
            raise CommandError(f"windows must share one length: {text!r}")
        return words

    @staticmethod
    def parse_points(text: str) -> tuple[Fraction, ...]:
        return tuple(CommandParser.parse_rational(part, "point") for part in text.split(",") if part.strip())

    @staticmethod
    def require(value: Optional[object], flag: str, subcommand: str) -> None:
        if value is None:
            raise CommandError(f"{subcommand} needs {flag}")
