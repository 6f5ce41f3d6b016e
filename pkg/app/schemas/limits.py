"""
Window-set representations of closed shift-invariant sets.
"""

from fractions import Fraction
from typing import Callable, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.exceptions import InconsistencyError
from app.schemas.symbolic import MemoizedModel, Word, WordField, word_text


# ============================================================================
# Provenance
# ============================================================================


class Provenance(BaseModel):
    """Whether a window set is exact or came from a stabilized finite scan."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["exact", "empirical"] = "exact"
    cutoff: Optional[int] = None

    @classmethod
    def exact(cls) -> "Provenance":
        return cls(kind="exact")

    @classmethod
    def empirical(cls, cutoff: Optional[int] = None) -> "Provenance":
        return cls(kind="empirical", cutoff=cutoff)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def combine(self, other: "Provenance") -> "Provenance":
        if self.is_exact and other.is_exact:
            return self
        cutoffs = [c for c in (self.cutoff, other.cutoff) if c is not None]
        return Provenance.empirical(max(cutoffs) if cutoffs else None)

    @property
    def tag(self) -> str:
        if self.is_exact:
            return "exact"
        if self.cutoff is None:
            return "empirical"
        return f"empirical(cutoff={self.cutoff})"


# ============================================================================
# Window sets
# ============================================================================


class WindowSet(BaseModel):
    """All words of one length L admitted by a closed set."""

    model_config = ConfigDict(frozen=True)

    L: int = Field(..., ge=1)
    words: frozenset[WordField] = frozenset()
    provenance: Provenance = Provenance()

    @model_validator(mode="after")
    def uniform_length(self) -> "WindowSet":
        for word in self.words:
            if len(word) != self.L:
                raise ValueError(f"word {word_text(word)} does not have length {self.L}")
        return self

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def is_empty(self) -> bool:
        return not self.words

    def contains(self, word: Word) -> bool:
        return tuple(word) in self.words

    def sorted_words(self) -> list[Word]:
        return sorted(self.words)

    def texts(self) -> list[str]:
        return [word_text(word) for word in self.sorted_words()]

    def factors(self, length: int) -> frozenset[Word]:
        return frozenset(
            word[i:i + length]
            for word in self.words
            for i in range(self.L - length + 1)
        )

    def reversed(self) -> "WindowSet":
        return WindowSet(
            L=self.L,
            words=frozenset(word[::-1] for word in self.words),
            provenance=self.provenance,
        )

    def intersection(self, other: "WindowSet") -> "WindowSet":
        if other.L != self.L:
            raise InconsistencyError(f"cannot intersect windows of length {self.L} and {other.L}")
        return WindowSet(
            L=self.L,
            words=self.words & other.words,
            provenance=self.provenance.combine(other.provenance),
        )

    def same_words(self, other: "WindowSet") -> bool:
        return self.L == other.L and self.words == other.words


class Dyadic(BaseModel):
    """A bound of the form 2^-exponent, or zero when exponent is None."""

    model_config = ConfigDict(frozen=True)

    exponent: Optional[int] = Field(None, ge=0)

    @classmethod
    def zero(cls) -> "Dyadic":
        return cls(exponent=None)

    @classmethod
    def power(cls, exponent: int) -> "Dyadic":
        return cls(exponent=exponent)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    @property
    def value(self) -> Fraction:
        if self.exponent is None:
            return Fraction(0)
        return Fraction(1, 2 ** self.exponent)

    @property
    def text(self) -> str:
        return "0" if self.exponent is None else f"2^-{self.exponent}"


class StabilizationPolicy(BaseModel):
    """
    How limit windows are obtained.

    ``auto`` uses exact template analysis when the tail has one and a
    doubling scan otherwise; ``empirical`` always scans.
    """

    model_config = ConfigDict(frozen=True)

    mode: Literal["auto", "empirical"] = "auto"
    initial: int = Field(64, ge=2)
    budget: int = Field(65536, ge=2)


# ============================================================================
# Closed-set specs
# ============================================================================


class ClosedSetSpec(MemoizedModel):
    """A closed shift-invariant set given by its window sets at every length."""

    model_config = ConfigDict(frozen=True)

    name: str = ""
    generator: Callable[[int], WindowSet]
    provenance: Provenance = Provenance()
    two_sided: bool = False

    def windows(self, L: int) -> WindowSet:
        if L < 1:
            raise InconsistencyError(f"window length must be positive, got {L}")

        def compute() -> WindowSet:
            result = self.generator(L)
            if result.L != L:
                raise InconsistencyError(
                    f"{self.name or 'spec'} produced length {result.L} for requested length {L}"
                )
            return result

        return self.cached(L, compute)

    def window_length(self, k: int) -> int:
        """Window length that decides closeness 2^-k under the dyadic metric."""
        return 2 * k + 1 if self.two_sided else k + 1

    def resolution_windows(self, k: int) -> WindowSet:
        return self.windows(self.window_length(k))

    def as_sided(self, two_sided: bool) -> "ClosedSetSpec":
        if two_sided == self.two_sided:
            return self
        return ClosedSetSpec(
            name=self.name,
            generator=self.windows,
            provenance=self.provenance,
            two_sided=two_sided,
        )

    def reversed(self) -> "ClosedSetSpec":
        return ClosedSetSpec(
            name=f"reversed({self.name})" if self.name else "reversed",
            generator=lambda L: self.windows(L).reversed(),
            provenance=self.provenance,
            two_sided=self.two_sided,
        )

    def check_factorial(self, max_length: int) -> None:
        for L in range(2, max_length + 1):
            longer = self.windows(L)
            shorter = self.windows(L - 1)
            if longer.factors(L - 1) != shorter.words:
                raise InconsistencyError(
                    f"{self.name or 'spec'}: length-{L - 1} factors of length-{L} windows "
                    f"differ from the length-{L - 1} windows",
                    details={"length": L},
                )
