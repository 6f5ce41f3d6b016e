"""Repository for piecewise polynomial interval map files."""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional

import pydantic

from app.exceptions import ParseError
from app.repositories.base_repository import BaseRepository
from app.schemas.interval import Piece, PiecewiseMap
from app.services.interval_service import IntervalService
from app.utils.validators import FieldValidators

logger = logging.getLogger(__name__)

BOOLEANS = {"true": True, "false": False, "1": True, "0": False}


class MapRepository(BaseRepository[PiecewiseMap]):
    """
    Loads ``.map`` files.

    Each piece is one line ``lo,hi,loClosed,hiClosed,c0,c1,c2`` with exact
    rational literals. ``name = ...`` and ``continuous = true|false`` lines
    are optional settings; maps are continuous unless stated otherwise.
    """

    suffix = ".map"

    def __init__(self, root: Path, intervals: Optional[IntervalService] = None):
        super().__init__(root)
        self.intervals = intervals or IntervalService()

    @staticmethod
    def _rational(text: str, source: str, line: int) -> Fraction:
        if not FieldValidators.validate_rational_text(text):
            raise ParseError(f"not an exact rational literal: {text!r}", source=source, line=line)
        return Fraction(text.strip())

    @staticmethod
    def _flag(text: str, source: str, line: int) -> bool:
        key = text.strip().lower()
        if key not in BOOLEANS:
            raise ParseError(f"expected true or false, got {text!r}", source=source, line=line)
        return BOOLEANS[key]

    def parse(self, text: str, source: str = "<text>", name: str = "") -> PiecewiseMap:
        continuous = True
        pieces: list[Piece] = []
        for number, line in self.content_lines(text):
            if "=" in line:
                key, _, value = (part.strip() for part in line.partition("="))
                if key == "name":
                    name = value
                elif key == "continuous":
                    continuous = self._flag(value, source, number)
                else:
                    raise ParseError(f"unknown setting {key!r}", source=source, line=number)
                continue

            fields = [field.strip() for field in line.split(",")]
            if len(fields) != 7:
                raise ParseError(f"expected 7 fields, got {len(fields)}", source=source, line=number)
            lo, hi = (self._rational(f, source, number) for f in fields[:2])
            lo_closed, hi_closed = (self._flag(f, source, number) for f in fields[2:4])
            c0, c1, c2 = (self._rational(f, source, number) for f in fields[4:])
            try:
                pieces.append(
                    Piece(lo=lo, hi=hi, lo_closed=lo_closed, hi_closed=hi_closed, c0=c0, c1=c1, c2=c2)
                )
            except pydantic.ValidationError as e:
                raise ParseError(f"invalid piece: {e.errors()[0]['msg']}", source=source, line=number)

        if not pieces:
            raise ParseError("no pieces", source=source)
        pieces.sort(key=lambda piece: piece.lo)
        fmap = PiecewiseMap(
            name=name,
            domain_lo=pieces[0].lo,
            domain_hi=pieces[-1].hi,
            pieces=tuple(pieces),
            continuous=continuous,
        )
        self.intervals.validate_map(fmap)
        logger.info(f"Loaded map {fmap.name!r} with {len(pieces)} piece(s)")
        return fmap
