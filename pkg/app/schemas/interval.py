"""
Exact rational interval-map types.

All coordinates are ``fractions.Fraction`` and serialize as ``p/q`` text.
"""

from fractions import Fraction
from typing import Annotated, Any, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, model_validator

from app.schemas.limits import Provenance


def to_fraction(value: Any) -> Any:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not an exact rational: {value!r}") from e
    raise ValueError(f"not an exact rational: {value!r}")


def fraction_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rat = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(fraction_text, return_type=str),
]


class RatInterval(BaseModel):
    """Interval with explicit endpoint membership."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lo: Rat
    hi: Rat
    lo_closed: bool = True
    hi_closed: bool = True

    @model_validator(mode="after")
    def ordered(self) -> "RatInterval":
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval {fraction_text(self.lo)}..{fraction_text(self.hi)}")
        return self

    def contains(self, x: Fraction) -> bool:
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    @property
    def text(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{fraction_text(self.lo)}, {fraction_text(self.hi)}{right}"


class Piece(RatInterval):
    """Polynomial c0 + c1*x + c2*x^2 on one interval of the partition."""

    c0: Rat = Fraction(0)
    c1: Rat = Fraction(0)
    c2: Rat = Fraction(0)

    @property
    def degree(self) -> int:
        if self.c2:
            return 2
        return 1 if self.c1 else 0

    def value(self, x: Fraction) -> Fraction:
        return self.c0 + x * (self.c1 + x * self.c2)

    def range_on(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Exact range of the polynomial on the closed interval [lo, hi]."""
        values = [self.value(lo), self.value(hi)]
        if self.c2:
            vertex = -self.c1 / (2 * self.c2)
            if lo < vertex < hi:
                values.append(self.value(vertex))
        return min(values), max(values)


class PiecewiseMap(BaseModel):
    """Self-map of [domain_lo, domain_hi] given by pieces partitioning the domain."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = ""
    domain_lo: Rat
    domain_hi: Rat
    pieces: tuple[Piece, ...] = Field(..., min_length=1)
    continuous: bool = False

    @property
    def affine(self) -> bool:
        return all(piece.degree <= 1 for piece in self.pieces)

    @property
    def width(self) -> Fraction:
        return self.domain_hi - self.domain_lo

    def contains(self, x: Fraction) -> bool:
        return self.domain_lo <= x <= self.domain_hi


class PreimageSet(BaseModel):
    """Solutions of f(x) = y: isolated points plus whole intervals from constant pieces."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: tuple[Rat, ...] = ()
    intervals: tuple[RatInterval, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.points and not self.intervals


class PseudoOrbitNum(BaseModel):
    """Finite rational pseudo-orbit with jump bound delta."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: tuple[Rat, ...] = Field(..., min_length=1)
    delta: Rat

    @model_validator(mode="after")
    def positive_delta(self) -> "PseudoOrbitNum":
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        return self


class NumVerification(BaseModel):
    """Exact pseudo-orbit check; max_jump is the largest |f(x_i) - x_(i+1)|."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    valid: bool
    first_failure: Optional[int] = None
    max_jump: Rat = Fraction(0)


class BoxGraph(BaseModel):
    """Fattened-image transition graph on the uniform grid of width h."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    h: Rat
    fatten: Rat
    count: int = Field(..., ge=1)
    edges: frozenset[tuple[int, int]]

    def successors(self, box: int) -> list[int]:
        return sorted(j for i, j in self.edges if i == box)


class BoxSet(BaseModel):
    """Grid boxes selected by an analysis, with the parameters that produced them."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    h: Rat
    boxes: frozenset[int]
    depth: Optional[int] = None
    provenance: Provenance = Provenance()

    def sorted_boxes(self) -> list[int]:
        return sorted(self.boxes)


class FalsificationCertificate(BaseModel):
    """Exact record that a delta-pseudo-orbit escapes every epsilon-shadow."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    epsilon: Rat
    delta: Rat
    start: Rat
    entries: tuple[Rat, ...]
    snapped: tuple[int, ...] = ()
    max_jump: Rat
    obligations: dict[str, bool]
    mode: Literal["exact", "snapped"] = "exact"

    @property
    def not_shadowable(self) -> bool:
        return all(self.obligations.values())
