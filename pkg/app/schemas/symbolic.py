"""
Symbolic-dynamics data types: alphabets, words, finitely described points
and shifts of finite type.

Points are immutable pydantic models. One-sided points are stored in
"stream" order (transient first). A left tail stores its data so that its
mirror image is the stream read outward from the center.
"""

import math
import threading
from functools import cached_property
from typing import Annotated, Any, Callable, ClassVar, Iterable, Literal, Optional, TypeVar, Union

import networkx as nx
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    PrivateAttr,
    field_validator,
    model_validator,
)

from app.exceptions import WindowOutOfRangeError


Word = tuple[str, ...]
Side = Literal["right", "left"]

T = TypeVar("T")


def to_word(text: Union[str, Iterable[str]]) -> Word:
    """Juxtaposed single-character text, or comma-separated multi-character symbols."""
    if isinstance(text, str):
        text = text.strip()
        if "," in text:
            return tuple(part.strip() for part in text.split(",") if part.strip())
        return tuple(text)
    return tuple(text)


def word_text(word: Iterable[str]) -> str:
    word = tuple(word)
    if all(len(symbol) == 1 for symbol in word):
        return "".join(word)
    return ",".join(word)


def _coerce_word(value: Any) -> Any:
    if isinstance(value, str):
        return to_word(value)
    if isinstance(value, list):
        return tuple(value)
    return value


WordField = Annotated[
    Word,
    BeforeValidator(_coerce_word),
    PlainSerializer(word_text, return_type=str, when_used="json"),
]


class MemoizedModel(BaseModel):
    """Immutable model with an internally synchronized computation cache."""

    _cache: dict = PrivateAttr(default_factory=dict)
    _lock: Any = PrivateAttr(default_factory=threading.RLock)

    def cached(self, key: Any, factory: Callable[[], T]) -> T:
        with self._lock:
            if key not in self._cache:
                self._cache[key] = factory()
            return self._cache[key]


# ============================================================================
# Alphabet
# ============================================================================


class Alphabet(BaseModel):
    """Ordered finite set of distinct symbols."""

    model_config = ConfigDict(frozen=True)

    symbols: tuple[str, ...] = Field(..., min_length=1)

    @field_validator("symbols")
    @classmethod
    def distinct(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        if len(set(v)) != len(v):
            raise ValueError("alphabet symbols must be distinct")
        if any(not symbol for symbol in v):
            raise ValueError("alphabet symbols must be nonempty")
        return v

    @classmethod
    def of(cls, text: str) -> "Alphabet":
        return cls(symbols=to_word(text))

    def contains(self, word: Iterable[str]) -> bool:
        allowed = set(self.symbols)
        return all(symbol in allowed for symbol in word)

    def rank(self, symbol: str) -> int:
        return self.symbols.index(symbol)


# ============================================================================
# Schedules
# ============================================================================


class SegmentTemplate(BaseModel):
    """
    One piece of a scheduled segment.

    Literal templates render ``prefix``. Block templates render
    ``prefix + symbol^(a*n + b) + suffix`` at stage n.
    """

    model_config = ConfigDict(frozen=True)

    prefix: WordField = ()
    symbol: Optional[str] = None
    a: int = Field(0, ge=0)
    b: int = Field(0, ge=0)
    suffix: WordField = ()

    @model_validator(mode="after")
    def check_shape(self) -> "SegmentTemplate":
        if self.symbol is None:
            if self.a or self.b or self.suffix:
                raise ValueError("literal templates carry only a prefix")
        elif self.a + self.b < 1:
            raise ValueError("block exponent a*n+b needs a+b >= 1")
        return self

    @property
    def growth(self) -> int:
        return self.a if self.symbol is not None else 0

    @property
    def base_length(self) -> int:
        block = self.b if self.symbol is not None else 0
        return len(self.prefix) + block + len(self.suffix)

    def count(self, n: int) -> int:
        return self.a * n + self.b

    def length(self, n: int) -> int:
        return self.base_length + self.growth * n

    def render(self, n: int) -> Word:
        if self.symbol is None:
            return self.prefix
        return self.prefix + (self.symbol,) * self.count(n) + self.suffix

    def saturated(self, L: int) -> Word:
        """Growing blocks cut to exactly L copies; everything else as rendered."""
        if self.growth == 0:
            return self.render(0)
        return self.prefix + (self.symbol,) * L + self.suffix

    def symbol_at(self, n: int, offset: int) -> str:
        if offset < len(self.prefix):
            return self.prefix[offset]
        offset -= len(self.prefix)
        if self.symbol is not None:
            c = self.count(n)
            if offset < c:
                return self.symbol
            offset -= c
        return self.suffix[offset]

    def reversed(self) -> "SegmentTemplate":
        if self.symbol is None:
            return SegmentTemplate(prefix=self.prefix[::-1])
        return SegmentTemplate(
            prefix=self.suffix[::-1],
            symbol=self.symbol,
            a=self.a,
            b=self.b,
            suffix=self.prefix[::-1],
        )


class _OneSided(BaseModel):
    """Shared stream access for one-sided descriptions."""

    model_config = ConfigDict(frozen=True)

    side: Side = "right"
    exact: ClassVar[bool] = True

    def stream_at(self, i: int) -> str:
        return self.stream(i, i + 1)[0]

    def stream(self, start: int, stop: int) -> Word:
        raise NotImplementedError

    @property
    def length(self) -> Optional[int]:
        return None

    def mirror(self):
        raise NotImplementedError

    @cached_property
    def outward(self):
        """Right-reading stream of this tail, starting next to the center."""
        return self if self.side == "right" else self.mirror()

    def window(self, i: int, L: int) -> Word:
        if L < 0:
            raise WindowOutOfRangeError(f"negative window length {L}")
        if self.side == "right":
            if i < 0:
                raise WindowOutOfRangeError(f"index {i} lies left of a one-sided point")
            return self.stream(i, i + L)
        if i + L > 0:
            raise WindowOutOfRangeError(f"window [{i}, {i + L}) leaves a left tail")
        return self.outward.stream(-i - L, -i)[::-1]

    def symbol_at(self, i: int) -> str:
        return self.window(i, 1)[0]


class ScheduledPoint(_OneSided):
    """
    transient . w_start . w_{start+1} . ... with w_n rendered from templates.

    Segment lengths are A*n + B, so the stream position of any stage has a
    closed form and lookups use binary search.
    """

    kind: Literal["scheduled"] = "scheduled"
    transient: WordField = ()
    templates: tuple[SegmentTemplate, ...] = Field(..., min_length=1)
    start: int = Field(1, ge=0)

    @model_validator(mode="after")
    def nonempty_segments(self) -> "ScheduledPoint":
        if self.segment_length(self.start) < 1:
            raise ValueError("scheduled segments must be nonempty")
        return self

    @property
    def growth(self) -> int:
        return sum(t.growth for t in self.templates)

    @property
    def base(self) -> int:
        return sum(t.base_length for t in self.templates)

    def segment_length(self, n: int) -> int:
        return self.growth * n + self.base

    def segment(self, n: int) -> Word:
        out: list[str] = []
        for template in self.templates:
            out.extend(template.render(n))
        return tuple(out)

    def cumulative(self, n: int) -> int:
        """Total length of segments start..n."""
        if n < self.start:
            return 0

        def tri(m: int) -> int:
            return m * (m + 1) // 2

        return self.growth * (tri(n) - tri(self.start - 1)) + self.base * (n - self.start + 1)

    def _locate(self, pos: int) -> tuple[int, int]:
        hi = self.start
        while self.cumulative(hi) <= pos:
            hi = self.start + 2 * (hi - self.start + 1)
        lo = self.start
        while lo < hi:
            mid = (lo + hi) // 2
            if self.cumulative(mid) > pos:
                hi = mid
            else:
                lo = mid + 1
        return lo, pos - self.cumulative(lo - 1)

    def stream(self, start: int, stop: int) -> Word:
        out: list[str] = []
        i = start
        t = len(self.transient)
        if i < t:
            out.extend(self.transient[i:min(stop, t)])
            i = min(stop, t)
        if i < stop:
            n, offset = self._locate(i - t)
            while i < stop:
                seg = self.segment(n)
                take = seg[offset:offset + (stop - i)]
                out.extend(take)
                i += len(take)
                n += 1
                offset = 0
        return tuple(out)

    def mirror(self) -> "ScheduledPoint":
        return ScheduledPoint(
            transient=self.transient[::-1],
            templates=tuple(t.reversed() for t in reversed(self.templates)),
            start=self.start,
            side="left" if self.side == "right" else "right",
        )

    def limit_cycle(self, L: int) -> Word:
        out: list[str] = []
        for template in self.templates:
            out.extend(template.saturated(L))
        return tuple(out)

    def saturation_stage(self, L: int) -> int:
        """Least stage from which every growing block has at least L+1 copies."""
        stage = self.start
        for t in self.templates:
            if t.growth:
                stage = max(stage, math.ceil((L + 1 - t.b) / t.a))
        return stage

    def explicit_prefix(self, L: int) -> Word:
        """Stream part whose windows are not all limit windows."""
        boundary = len(self.transient) + self.cumulative(self.saturation_stage(L) - 1)
        return self.stream(0, boundary + L - 1)


class PeriodicPoint(_OneSided):
    """transient . period^inf; as a left tail it reads ... period period transient."""

    kind: Literal["periodic"] = "periodic"
    transient: WordField = ()
    period: WordField = Field(..., min_length=1)

    def stream(self, start: int, stop: int) -> Word:
        t = len(self.transient)
        p = len(self.period)
        return tuple(
            self.transient[i] if i < t else self.period[(i - t) % p]
            for i in range(start, stop)
        )

    def mirror(self) -> "PeriodicPoint":
        return PeriodicPoint(
            transient=self.transient[::-1],
            period=self.period[::-1],
            side="left" if self.side == "right" else "right",
        )

    def limit_cycle(self, L: int) -> Word:
        return self.period

    def explicit_prefix(self, L: int) -> Word:
        return self.stream(0, len(self.transient) + L - 1)


class FinitePoint(_OneSided):
    """A finite prefix of a stream; windows past its end are not described."""

    kind: Literal["finite"] = "finite"
    word: WordField = ()
    exact: ClassVar[bool] = False

    @property
    def length(self) -> Optional[int]:
        return len(self.word)

    def stream(self, start: int, stop: int) -> Word:
        if stop > len(self.word):
            raise WindowOutOfRangeError(
                f"window [{start}, {stop}) exceeds finite prefix of length {len(self.word)}"
            )
        return self.word[start:stop]

    def mirror(self) -> "FinitePoint":
        return FinitePoint(
            word=self.word[::-1],
            side="left" if self.side == "right" else "right",
        )


OneSidedPoint = Annotated[
    Union[ScheduledPoint, PeriodicPoint, FinitePoint],
    Field(discriminator="kind"),
]


class TwoSidedPoint(BaseModel):
    """Left tail on indices < 0, center from index 0, right tail after the center."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["two_sided"] = "two_sided"
    left: OneSidedPoint
    center: WordField = ()
    right: OneSidedPoint

    @model_validator(mode="after")
    def check_sides(self) -> "TwoSidedPoint":
        if self.left.side != "left":
            raise ValueError("left tail must be a left-side description")
        if self.right.side != "right":
            raise ValueError("right tail must be a right-side description")
        return self

    @property
    def exact(self) -> bool:
        return self.left.exact and self.right.exact

    def window(self, i: int, L: int) -> Word:
        out: list[str] = []
        j, stop = i, i + L
        if j < 0:
            seg_stop = min(stop, 0)
            out.extend(self.left.window(j, seg_stop - j))
            j = seg_stop
        c = len(self.center)
        if j < stop and j < c:
            seg_stop = min(stop, c)
            out.extend(self.center[j:seg_stop])
            j = seg_stop
        if j < stop:
            out.extend(self.right.window(j - c, stop - j))
        return tuple(out)

    def symbol_at(self, i: int) -> str:
        return self.window(i, 1)[0]


Point = Annotated[
    Union[ScheduledPoint, PeriodicPoint, FinitePoint, TwoSidedPoint],
    Field(discriminator="kind"),
]

AnyPoint = Union[ScheduledPoint, PeriodicPoint, FinitePoint, TwoSidedPoint]


# ============================================================================
# Shifts of finite type
# ============================================================================


class SubshiftSFT(MemoizedModel):
    """
    Shift of finite type presented by forbidden words.

    ``edge_words`` are the admissible (order+1)-words on the bi-essential
    part of the order-block graph, i.e. exactly the (order+1)-windows of
    bi-infinite admissible points.
    """

    model_config = ConfigDict(frozen=True)

    alphabet: Alphabet
    forbidden: frozenset[WordField] = frozenset()
    memory: int = Field(..., ge=0)
    order: int = Field(..., ge=1)
    edge_words: frozenset[WordField]
    pruned_symbols: tuple[str, ...] = ()
    name: str = ""

    def is_admissible(self, word: Iterable[str]) -> bool:
        word = tuple(word)
        for f in self.forbidden:
            n = len(f)
            for i in range(len(word) - n + 1):
                if word[i:i + n] == f:
                    return False
        return True


class BlockGraph(BaseModel):
    """Overlap graph on k-words; an edge fuses to an admissible (k+1)-word."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1)
    vertices: frozenset[Word]
    edges: frozenset[tuple[Word, Word]]

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.vertices))
        graph.add_edges_from(sorted(self.edges))
        return graph

    def has_self_loop(self, vertex: Word) -> bool:
        return (vertex, vertex) in self.edges
