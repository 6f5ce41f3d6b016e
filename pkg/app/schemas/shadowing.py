"""
Pseudo-orbits in shift spaces, shadowing certificates and tail views used by
the orbital witness checkers.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.limits import Dyadic
from app.schemas.symbolic import AnyPoint, Point, TwoSidedPoint, WordField


Direction = Literal["forward", "backward", "two_sided"]


class PseudoOrbitSym(BaseModel):
    """
    Finite delta-pseudo-orbit with delta = 2^-delta_exponent.

    Entries are indexed start_index, start_index+1, ... . Forward orbits
    start at 0, backward orbits end at 0, two-sided orbits straddle 0. A
    pseudo-orbit of TwoSidedPoint entries lives in a two-sided shift and
    uses the two-sided metric.
    """

    model_config = ConfigDict(frozen=True)

    direction: Direction
    entries: tuple[Point, ...] = Field(..., min_length=1)
    delta_exponent: int = Field(..., ge=0)
    start_index: int = 0

    @model_validator(mode="after")
    def check_layout(self) -> "PseudoOrbitSym":
        kinds = {isinstance(entry, TwoSidedPoint) for entry in self.entries}
        if len(kinds) != 1:
            raise ValueError("entries must all be one-sided or all two-sided")
        if not self.two_sided_metric and any(entry.side != "right" for entry in self.entries):
            raise ValueError("one-sided entries must be right-side points")
        if self.direction == "forward" and self.start_index != 0:
            raise ValueError("forward pseudo-orbits start at index 0")
        if self.direction == "backward" and self.end_index != 0:
            raise ValueError("backward pseudo-orbits end at index 0")
        if self.direction == "two_sided" and not (self.start_index <= 0 <= self.end_index):
            raise ValueError("two-sided pseudo-orbits must contain index 0")
        return self

    @classmethod
    def backward(cls, entries: list[AnyPoint], delta_exponent: int) -> "PseudoOrbitSym":
        return cls(
            direction="backward",
            entries=tuple(entries),
            delta_exponent=delta_exponent,
            start_index=-(len(entries) - 1),
        )

    @property
    def two_sided_metric(self) -> bool:
        return isinstance(self.entries[0], TwoSidedPoint)

    @property
    def end_index(self) -> int:
        return self.start_index + len(self.entries) - 1

    @property
    def indices(self) -> range:
        return range(self.start_index, self.end_index + 1)

    @property
    def delta(self) -> Dyadic:
        return Dyadic.power(self.delta_exponent)

    def entry(self, index: int) -> AnyPoint:
        return self.entries[index - self.start_index]


class VerificationResult(BaseModel):
    """Outcome of a step-by-step check; first_failure is the index i of the bad pair (i, i+1)."""

    model_config = ConfigDict(frozen=True)

    valid: bool
    first_failure: Optional[int] = None
    checked: int = 0


class ShadowCertificate(BaseModel):
    """A shadowing point with its per-index agreement depth."""

    model_config = ConfigDict(frozen=True)

    direction: Direction
    shadow: Point
    epsilon_exponent: int = Field(..., ge=0)
    delta_exponent: int = Field(..., ge=0)
    two_sided_metric: bool = False
    start_index: int = 0
    depths: tuple[int, ...]

    @property
    def epsilon(self) -> Dyadic:
        return Dyadic.power(self.epsilon_exponent)

    @property
    def min_depth(self) -> int:
        return min(self.depths)


# ============================================================================
# Tails for the orbital witness checkers
# ============================================================================


class AsymptoticSchedule(BaseModel):
    """The jump at index i is below 2^-(base + |i| // stride)."""

    model_config = ConfigDict(frozen=True)

    base: int = Field(1, ge=0)
    stride: int = Field(1, ge=1)

    def required(self, index: int) -> int:
        return self.base + abs(index) // self.stride

    def truncation(self, index: int) -> int:
        """Agreement depth kept by the truncated entry at this index."""
        return self.required(index) + 2


class TrajectoryTail(BaseModel):
    """The genuine trajectory i -> shift^i(point)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["trajectory"] = "trajectory"
    point: Point
    two_sided_metric: bool = False


class PseudoOrbitTail(BaseModel):
    """
    A pseudo-orbit tail: either explicit entries, or the trajectory of
    ``source`` with entry i cut off beyond the schedule's truncation depth and
    continued with ``filler`` repeated.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["pseudo_orbit"] = "pseudo_orbit"
    explicit: Optional[PseudoOrbitSym] = None
    source: Optional[Point] = None
    schedule: Optional[AsymptoticSchedule] = None
    filler: WordField = ("0",)
    two_sided_metric: bool = False

    @model_validator(mode="after")
    def one_presentation(self) -> "PseudoOrbitTail":
        if (self.explicit is None) == (self.source is None):
            raise ValueError("give either explicit entries or a truncated source")
        if self.source is not None and self.schedule is None:
            raise ValueError("a truncated source needs an asymptotic schedule")
        if not self.filler:
            raise ValueError("filler must be nonempty")
        if self.explicit is not None and self.explicit.two_sided_metric != self.two_sided_metric:
            raise ValueError("explicit entries disagree with the metric flag")
        return self


class WitnessResult(BaseModel):
    """Finite-horizon witness search; absence of a witness refutes nothing."""

    model_config = ConfigDict(frozen=True)

    found: bool
    value: Optional[int] = None
    horizon: int

    @property
    def label(self) -> str:
        if self.found:
            return f"witness found ({self.value})"
        return f"witness not found within horizon {self.horizon}"
