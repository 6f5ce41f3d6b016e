"""
Pseudo-orbit verification and exact shadowing in shifts of finite type.

All closeness tests go through ``closeness_window`` and ``agreement_depth``: under the
dyadic metric d < 2^-j holds iff two points agree on indices 0..j
(one-sided) or -j..j (two-sided).
"""

import logging
import random
from typing import Optional

import networkx as nx

from app.exceptions import DeltaTooLargeError, ValidationError
from app.schemas.shadowing import Direction, PseudoOrbitSym, ShadowCertificate, VerificationResult
from app.schemas.symbolic import AnyPoint, PeriodicPoint, SubshiftSFT, TwoSidedPoint, Word, word_text
from app.services.spec_service import SpecService
from app.services.symbolic_service import SymbolicService
from app.utils.graphs import bfs_path, reachable_cycle_target, shortest_cycle

logger = logging.getLogger(__name__)


def closeness_window(point: AnyPoint, index: int, j: int, two_sided_metric: bool) -> Word:
    """Window of shift^index(point) that decides closeness below 2^-j."""
    if two_sided_metric:
        return point.window(index - j, 2 * j + 1)
    return point.window(index, j + 1)


def agreement_depth(first: Word, second: Word, j: int, two_sided_metric: bool) -> int:
    """
    Largest t <= j such that the two depth-j windows agree to depth t, or -1.
    """
    if two_sided_metric:
        for t in range(j + 1):
            if first[j - t] != second[j - t] or first[j + t] != second[j + t]:
                return t - 1
        return j
    for t in range(j + 1):
        if first[t] != second[t]:
            return t - 1
    return j


class ShadowingService:
    """Exact diagonal shadowing with canonical admissible completions."""

    def __init__(self, symbolic: Optional[SymbolicService] = None):
        self.symbolic = symbolic or SymbolicService()
        self.specs = SpecService(self.symbolic)

    # ------------------------------------------------------------------
    # Verification
    # ------------------------------------------------------------------

    def verify_pseudo_orbit(self, po: PseudoOrbitSym) -> VerificationResult:
        """Check that shift(x_i) and x_(i+1) agree to depth delta_exponent for every i."""
        j = po.delta_exponent
        two = po.two_sided_metric
        checked = 0
        for i in range(po.start_index, po.end_index):
            shifted = closeness_window(po.entry(i), 1, j, two)
            following = closeness_window(po.entry(i + 1), 0, j, two)
            checked += 1
            if shifted != following:
                logger.debug(f"Pseudo-orbit jump too large at index {i}")
                return VerificationResult(valid=False, first_failure=i, checked=checked)
        return VerificationResult(valid=True, checked=checked)

    def certificate_depths(self, po: PseudoOrbitSym, shadow: AnyPoint, j: int) -> tuple[int, ...]:
        two = po.two_sided_metric
        return tuple(
            agreement_depth(closeness_window(shadow, i, j, two), closeness_window(po.entry(i), 0, j, two), j, two)
            for i in po.indices
        )

    def is_admissible_point(self, sft: SubshiftSFT, point: AnyPoint) -> bool:
        windows = self.specs.orbit_language([point], sft.order + 1)
        return windows <= sft.edge_words

    def verify_certificate(self, sft: SubshiftSFT, po: PseudoOrbitSym, certificate: ShadowCertificate) -> bool:
        """Independent re-check of admissibility and per-index epsilon-agreement."""
        k = certificate.epsilon_exponent
        depths = self.certificate_depths(po, certificate.shadow, k)
        if any(depth < k for depth in depths):
            return False
        return self.is_admissible_point(sft, certificate.shadow)

    # ------------------------------------------------------------------
    # Completions
    # ------------------------------------------------------------------

    def complete_right(self, sft: SubshiftSFT, word: Word) -> tuple[Word, Word]:
        """Symbols extending ``word`` to the least reachable cycle, and that cycle's period."""
        graph = self.symbolic.order_graph(sft)
        vertex = word[len(word) - sft.order:]
        if len(vertex) < sft.order or vertex not in graph:
            raise ValidationError(f"word {word_text(word)} does not end in an admissible block")
        target = reachable_cycle_target(graph, vertex)
        path = bfs_path(graph, vertex, target)
        cycle = shortest_cycle(graph, target)
        return tuple(v[-1] for v in path[1:]), tuple(v[-1] for v in cycle[1:])

    def complete_left(self, sft: SubshiftSFT, word: Word) -> tuple[Word, Word]:
        """Reading-order symbols preceding ``word`` and the period repeated to their left."""
        graph = self.symbolic.order_graph(sft)
        vertex = word[:sft.order]
        if len(vertex) < sft.order or vertex not in graph:
            raise ValidationError(f"word {word_text(word)} does not start with an admissible block")
        target = reachable_cycle_target(graph, vertex, reverse=True)
        path = bfs_path(graph, vertex, target, reverse=True)
        cycle = shortest_cycle(graph, target)
        prefix = tuple(v[0] for v in reversed(path[1:]))
        return prefix, tuple(v[0] for v in cycle[:-1])

    def right_point(self, sft: SubshiftSFT, word: Word) -> PeriodicPoint:
        extension, period = self.complete_right(sft, word)
        return self.symbolic.prepend(word, PeriodicPoint(transient=extension, period=period))

    def two_sided_point(self, sft: SubshiftSFT, word: Word, zero: int) -> TwoSidedPoint:
        """Bi-infinite completion of ``word`` with index 0 at offset ``zero``."""
        word = tuple(word)
        left_ext, left_period = self.complete_left(sft, word)
        right_ext, right_period = self.complete_right(sft, word)
        return TwoSidedPoint(
            left=PeriodicPoint(side="left", transient=left_ext + word[:zero], period=left_period),
            center=word[zero:],
            right=PeriodicPoint(transient=right_ext, period=right_period),
        )

    # ------------------------------------------------------------------
    # Shadowing
    # ------------------------------------------------------------------

    def _check_entries(self, sft: SubshiftSFT, po: PseudoOrbitSym) -> None:
        j = po.delta_exponent
        language = self.symbolic.language(sft, 2 * j + 1 if po.two_sided_metric else j + 1).words
        for i in po.indices:
            window = closeness_window(po.entry(i), 0, j, po.two_sided_metric)
            if window not in language:
                raise ValidationError(
                    f"entry {i} is not admissible: {word_text(window)}",
                    details={"index": i},
                )
        result = self.verify_pseudo_orbit(po)
        if not result.valid:
            raise ValidationError(
                f"not a delta-pseudo-orbit: jump at index {result.first_failure}",
                details={"first_failure": result.first_failure},
            )

    def _shadow(self, sft: SubshiftSFT, po: PseudoOrbitSym, k: int) -> ShadowCertificate:
        if k < 0:
            raise ValidationError(f"epsilon exponent must be non-negative, got {k}")
        j = po.delta_exponent
        required = k + sft.memory
        if j < required:
            raise DeltaTooLargeError(j, required)
        self._check_entries(sft, po)

        two = po.two_sided_metric
        s, e = po.start_index, po.end_index
        diagonal: list[str] = []
        first = s
        if two:
            diagonal.extend(po.entry(s).window(-j, j))
            first = s - j
        diagonal.extend(po.entry(i).window(0, 1)[0] for i in range(s, e))
        diagonal.extend(po.entry(e).window(0, j + 1))
        word = tuple(diagonal)

        if po.direction == "forward" and not two:
            shadow: AnyPoint = self.right_point(sft, word)
        else:
            shadow = self.two_sided_point(sft, word, -first)

        depths = self.certificate_depths(po, shadow, j)
        logger.info(
            f"Shadowed {po.direction} pseudo-orbit of length {len(po.entries)} "
            f"(delta 2^-{j}, epsilon 2^-{k}, min depth {min(depths)})"
        )
        return ShadowCertificate(
            direction=po.direction,
            shadow=shadow,
            epsilon_exponent=k,
            delta_exponent=j,
            two_sided_metric=two,
            start_index=s,
            depths=depths,
        )

    def _require(self, po: PseudoOrbitSym, direction: Direction) -> None:
        if po.direction != direction:
            raise ValidationError(f"expected a {direction} pseudo-orbit, got {po.direction}")

    def shadow_forward(self, sft: SubshiftSFT, po: PseudoOrbitSym, k: int) -> ShadowCertificate:
        self._require(po, "forward")
        return self._shadow(sft, po, k)

    def shadow_backward(self, sft: SubshiftSFT, po: PseudoOrbitSym, k: int) -> ShadowCertificate:
        """The shadow is a genuine backward trajectory: entry i is shift^i of one bi-infinite point."""
        self._require(po, "backward")
        return self._shadow(sft, po, k)

    def shadow_two_sided(self, sft: SubshiftSFT, po: PseudoOrbitSym, k: int) -> ShadowCertificate:
        self._require(po, "two_sided")
        return self._shadow(sft, po, k)

    def shadow(self, sft: SubshiftSFT, po: PseudoOrbitSym, k: int) -> ShadowCertificate:
        return self._shadow(sft, po, k)

    # ------------------------------------------------------------------
    # Random pseudo-orbits
    # ------------------------------------------------------------------

    def _walk(self, graph: nx.DiGraph, vertex: Word, steps: int, rng: random.Random, reverse: bool) -> Word:
        symbols: list[str] = []
        for _ in range(steps):
            options = sorted(graph.predecessors(vertex) if reverse else graph.successors(vertex))
            vertex = rng.choice(options)
            symbols.append(vertex[0] if reverse else vertex[-1])
        return tuple(reversed(symbols)) if reverse else tuple(symbols)

    def random_pseudo_orbit(
        self,
        sft: SubshiftSFT,
        direction: Direction,
        delta_exponent: int,
        length: int,
        rng: random.Random,
        two_sided_metric: bool = False,
    ) -> PseudoOrbitSym:
        """
        Seeded pseudo-orbit whose jumps happen strictly beyond the delta window.

        Each entry keeps the previous entry's shifted window and appends a
        random admissible walk of one to four symbols before completing.
        """
        if length < 1:
            raise ValidationError("pseudo-orbit length must be positive")
        graph = self.symbolic.order_graph(sft)
        j = delta_exponent
        span = 2 * j + 1 if two_sided_metric else j + 1
        start = rng.choice(sorted(graph.nodes))
        seed_word = start + self._walk(graph, start, max(span - len(start), 0), rng, reverse=False)

        entries: list[AnyPoint] = []
        if two_sided_metric:
            current: AnyPoint = self.two_sided_point(sft, seed_word, j)
        else:
            current = self.right_point(sft, seed_word)
        entries.append(current)

        for _ in range(length - 1):
            core = closeness_window(current, 1, j, two_sided_metric)
            tail = self._walk(graph, core[len(core) - sft.order:], rng.randint(1, 4), rng, reverse=False)
            if two_sided_metric:
                head = self._walk(graph, core[:sft.order], rng.randint(1, 4), rng, reverse=True)
                current = self.two_sided_point(sft, head + core + tail, len(head) + j)
            else:
                current = self.right_point(sft, core + tail)
            entries.append(current)

        start_index = 0
        if direction == "backward":
            start_index = -(length - 1)
        elif direction == "two_sided":
            start_index = -(length // 2)
        return PseudoOrbitSym(
            direction=direction,
            entries=tuple(entries),
            delta_exponent=j,
            start_index=start_index,
        )
