"""
Shifts of finite type, their languages, block graphs and window access.
"""

import logging
from collections import defaultdict
from typing import Callable, Iterable, Optional

import networkx as nx

from app.exceptions import EmptySubshiftError, InconsistencyError, ValidationError
from app.schemas.limits import Provenance, WindowSet
from app.schemas.symbolic import (
    AnyPoint,
    Alphabet,
    BlockGraph,
    SubshiftSFT,
    Word,
    word_text,
)
from app.utils.graphs import prune_to_essential, sorted_digraph

logger = logging.getLogger(__name__)


def text_windows(text: Word, L: int) -> frozenset[Word]:
    return frozenset(text[i:i + L] for i in range(len(text) - L + 1))


def cyclic_windows(cycle: Word, L: int) -> frozenset[Word]:
    """Windows of cycle^inf that start inside one period."""
    repeats = -(-L // len(cycle)) + 1
    text = cycle * repeats
    return frozenset(text[i:i + L] for i in range(len(cycle)))


def admissible_words(symbols: Iterable[str], forbidden: Iterable[Word], length: int) -> set[Word]:
    """Words of the given length with no forbidden factor, grown one symbol at a time."""
    symbols = tuple(symbols)
    forbidden = tuple(forbidden)
    words: list[Word] = [()]
    for _ in range(length):
        grown = []
        for word in words:
            for symbol in symbols:
                candidate = word + (symbol,)
                if not any(candidate[-len(f):] == f for f in forbidden if len(f) <= len(candidate)):
                    grown.append(candidate)
        words = grown
    return set(words)


def essential_edges(edge_words: Iterable[Word]) -> frozenset[Word]:
    """Keep the edge words that lie on some bi-infinite path of the overlap graph."""
    edge_words = frozenset(edge_words)
    graph = sorted_digraph(
        {w[:-1] for w in edge_words} | {w[1:] for w in edge_words},
        {(w[:-1], w[1:]) for w in edge_words},
    )
    core = prune_to_essential(graph)
    return frozenset(w for w in edge_words if core.has_edge(w[:-1], w[1:]))


def path_language(
    edge_words: frozenset[Word],
    L: int,
    shorter: Callable[[int], frozenset[Word]],
) -> frozenset[Word]:
    """
    Length-L words of the vertex shift whose allowed (order+1)-words are
    ``edge_words``. Longer words extend ``shorter(L - 1)`` by one edge.
    """
    if not edge_words:
        return frozenset()
    order = len(next(iter(edge_words))) - 1
    if L <= order + 1:
        return frozenset(w[i:i + L] for w in edge_words for i in range(order + 2 - L))
    by_prefix: dict[Word, list[str]] = defaultdict(list)
    for edge in edge_words:
        by_prefix[edge[:-1]].append(edge[-1])
    return frozenset(
        word + (symbol,)
        for word in shorter(L - 1)
        for symbol in by_prefix.get(word[len(word) - order:], ())
    )


class SymbolicService:
    """Shifts of finite type and block-graph analysis of window sets."""

    def sft_from_forbidden(
        self,
        alphabet: Alphabet,
        forbidden: Iterable[Word],
        name: str = "",
    ) -> SubshiftSFT:
        """Build an SFT and prune it to its bi-essential part."""
        forbidden = frozenset(tuple(f) for f in forbidden)
        for word in forbidden:
            if not word:
                raise ValidationError("forbidden words must be nonempty")
            if not alphabet.contains(word):
                raise ValidationError(
                    f"forbidden word {word_text(word)} uses symbols outside the alphabet",
                    details={"word": word_text(word)},
                )

        memory = max((len(f) for f in forbidden), default=1) - 1
        order = max(memory, 1)
        edges = essential_edges(admissible_words(alphabet.symbols, forbidden, order + 1))
        if not edges:
            raise EmptySubshiftError(f"{name or 'subshift'} admits no bi-infinite sequence")

        used = {symbol for edge in edges for symbol in edge}
        pruned = tuple(s for s in alphabet.symbols if s not in used)
        if pruned:
            logger.warning(f"{name or 'subshift'}: symbols {', '.join(pruned)} occur in no bi-infinite point")

        logger.debug(f"Built SFT {name!r}: memory={memory}, order={order}, edges={len(edges)}")
        return SubshiftSFT(
            alphabet=alphabet,
            forbidden=forbidden,
            memory=memory,
            order=order,
            edge_words=edges,
            pruned_symbols=pruned,
            name=name,
        )

    def sft_from_windows(
        self,
        allowed: WindowSet,
        alphabet: Optional[Alphabet] = None,
        name: str = "",
    ) -> SubshiftSFT:
        """The SFT whose forbidden words are all length-L words outside ``allowed``."""
        if alphabet is None:
            symbols = sorted({s for word in allowed.words for s in word})
            if not symbols:
                raise EmptySubshiftError("an empty window set presents the empty subshift")
            alphabet = Alphabet(symbols=tuple(symbols))
        every = admissible_words(alphabet.symbols, (), allowed.L)
        return self.sft_from_forbidden(alphabet, every - set(allowed.words), name=name)

    def _language_words(self, sft: SubshiftSFT, L: int) -> frozenset[Word]:
        return sft.cached(
            ("language", L),
            lambda: path_language(sft.edge_words, L, lambda m: self._language_words(sft, m)),
        )

    def language(self, sft: SubshiftSFT, L: int) -> WindowSet:
        """Length-L words that occur in some bi-infinite point of the SFT."""
        if L < 1:
            raise ValidationError(f"window length must be positive, got {L}")
        return WindowSet(L=L, words=self._language_words(sft, L), provenance=Provenance.exact())

    def order_graph(self, sft: SubshiftSFT) -> nx.DiGraph:
        """Vertex graph on order-words whose edges are the SFT's edge words."""
        return sft.cached(
            ("order_graph",),
            lambda: sorted_digraph(
                {e[:-1] for e in sft.edge_words} | {e[1:] for e in sft.edge_words},
                {(e[:-1], e[1:]) for e in sft.edge_words},
            ),
        )

    def block_graph(self, windows: WindowSet, extension: Optional[WindowSet] = None) -> BlockGraph:
        """
        Overlap graph on ``windows``.

        Without ``extension`` every overlapping pair is an edge; with it the
        fused (k+1)-word must also be an extension word.
        """
        k = windows.L
        vertices = windows.words
        if k >= 2 and vertices:
            prefixes = {w[:-1] for w in vertices}
            suffixes = {w[1:] for w in vertices}
            if prefixes != suffixes:
                raise InconsistencyError(
                    f"length-{k} windows are not extendable on both sides",
                    details={"only_prefix": sorted(map(word_text, prefixes - suffixes)),
                             "only_suffix": sorted(map(word_text, suffixes - prefixes))},
                )
        if extension is not None:
            if extension.L != k + 1:
                raise InconsistencyError(f"extension windows must have length {k + 1}, got {extension.L}")
            for word in extension.words:
                if word[:-1] not in vertices or word[1:] not in vertices:
                    raise InconsistencyError(
                        f"extension word {word_text(word)} is not built from the given windows"
                    )

        by_prefix: dict[Word, list[Word]] = defaultdict(list)
        for v in vertices:
            by_prefix[v[:-1]].append(v)
        edges = set()
        for u in vertices:
            for v in by_prefix.get(u[1:], ()):
                if extension is None or (u + v[-1:]) in extension.words:
                    edges.add((u, v))
        return BlockGraph(k=k, vertices=vertices, edges=frozenset(edges))

    def window_at(self, point: AnyPoint, i: int, L: int) -> Word:
        return point.window(i, L)

    def prepend(self, word: Word, point: AnyPoint) -> AnyPoint:
        """The one-sided point ``word . point``."""
        if getattr(point, "side", "right") != "right":
            raise ValidationError("can only prepend to a right-side point")
        return point.model_copy(update={"transient": tuple(word) + point.transient}) \
            if hasattr(point, "transient") else point.model_copy(update={"word": tuple(word) + point.word})
