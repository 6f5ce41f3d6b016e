"""Repository for shift-of-finite-type files."""

import logging
from pathlib import Path
from typing import Optional

import pydantic

from app.exceptions import ParseError
from app.repositories.base_repository import BaseRepository
from app.schemas.symbolic import Alphabet, SubshiftSFT, Word, word_text
from app.services.symbolic_service import SymbolicService
from app.utils.validators import FieldValidators

logger = logging.getLogger(__name__)


class SftRepository(BaseRepository[SubshiftSFT]):
    """
    Loads ``.sft`` files.

    The first line lists the alphabet separated by spaces; every following
    line is one forbidden word.
    """

    suffix = ".sft"

    def __init__(self, root: Path, symbolic: Optional[SymbolicService] = None):
        super().__init__(root)
        self.symbolic = symbolic or SymbolicService()

    @staticmethod
    def _word(line: str, alphabet: Alphabet) -> Word:
        if any(len(symbol) > 1 for symbol in alphabet.symbols):
            return tuple(part.strip() for part in line.split(",") if part.strip())
        return tuple(line.replace(" ", ""))

    def parse(self, text: str, source: str = "<text>", name: str = "") -> SubshiftSFT:
        lines = list(self.content_lines(text))
        if not lines:
            raise ParseError("missing alphabet line", source=source, line=1)

        number, header = lines[0]
        try:
            alphabet = Alphabet(symbols=tuple(header.split()))
        except pydantic.ValidationError as e:
            raise ParseError(f"invalid alphabet: {e.errors()[0]['msg']}", source=source, line=number)

        forbidden: list[Word] = []
        for number, line in lines[1:]:
            word = self._word(line, alphabet)
            if not FieldValidators.validate_word_over(word, alphabet.symbols):
                unknown = sorted(set(word) - set(alphabet.symbols))
                raise ParseError(
                    f"forbidden word {line!r} uses unknown symbol(s) {', '.join(unknown)}",
                    source=source,
                    line=number,
                )
            forbidden.append(word)

        sft = self.symbolic.sft_from_forbidden(alphabet, forbidden, name=name)
        shown = ", ".join(sorted(word_text(w) for w in sft.forbidden)) or "none"
        logger.info(f"Loaded SFT {sft.name!r}: forbidden {shown}")
        return sft
