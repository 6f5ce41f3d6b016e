"""
Exact interval dynamics for piecewise polynomial maps with rational
coefficients.

Evaluation, orbits, preimages and pseudo-orbit checks are exact. Negative
limit sets and chain recurrence are reported on a uniform grid of boxes;
box j covers [a + j*h, a + (j+1)*h).
"""

import logging
import math
from fractions import Fraction
from typing import Iterable, Literal, Optional

from app.exceptions import BudgetError, DomainError, UnsupportedPieceError, ValidationError
from app.schemas.interval import (
    BoxGraph,
    BoxSet,
    FalsificationCertificate,
    NumVerification,
    Piece,
    PiecewiseMap,
    PreimageSet,
    PseudoOrbitNum,
    RatInterval,
    fraction_text,
)
from app.schemas.limits import Provenance
from app.utils.decorators import timed
from app.utils.graphs import is_strongly_connected_with_edge, nontrivial_components, sorted_digraph
from app.utils.validators import FieldValidators

logger = logging.getLogger(__name__)

TrajectoryMode = Literal["A2", "A3"]


class IntervalService:
    """Exact piecewise-polynomial interval maps and their box-level analyses."""

    def __init__(self, max_denominator_bits: int = 4096, max_pseudo_orbit_length: int = 256):
        self.max_denominator_bits = max_denominator_bits
        self.max_pseudo_orbit_length = max_pseudo_orbit_length

    # ------------------------------------------------------------------
    # Map validation and evaluation
    # ------------------------------------------------------------------

    def validate_map(self, fmap: PiecewiseMap) -> PiecewiseMap:
        """Check partition, self-map range and (when declared) continuity."""
        pieces = fmap.pieces
        first, last = pieces[0], pieces[-1]
        if first.lo != fmap.domain_lo or not first.lo_closed:
            raise ValidationError(f"{fmap.name or 'map'}: first piece must start at the closed domain endpoint")
        if last.hi != fmap.domain_hi or not last.hi_closed:
            raise ValidationError(f"{fmap.name or 'map'}: last piece must end at the closed domain endpoint")
        for left, right in zip(pieces, pieces[1:]):
            if left.hi != right.lo or left.hi_closed == right.lo_closed:
                raise ValidationError(
                    f"{fmap.name or 'map'}: pieces {left.text} and {right.text} do not partition the domain"
                )
            if fmap.continuous and left.value(left.hi) != right.value(right.lo):
                raise ValidationError(
                    f"{fmap.name or 'map'}: discontinuity at {fraction_text(left.hi)}"
                )
        for piece in pieces:
            lo, hi = piece.range_on(piece.lo, piece.hi)
            if lo < fmap.domain_lo or hi > fmap.domain_hi:
                raise ValidationError(
                    f"{fmap.name or 'map'}: piece {piece.text} leaves the domain "
                    f"(range {fraction_text(lo)}..{fraction_text(hi)})"
                )
        return fmap

    def piece_for(self, fmap: PiecewiseMap, x: Fraction) -> Piece:
        if not fmap.contains(x):
            raise DomainError(
                f"{fraction_text(x)} lies outside [{fraction_text(fmap.domain_lo)}, {fraction_text(fmap.domain_hi)}]"
            )
        for piece in fmap.pieces:
            if piece.contains(x):
                return piece
        raise DomainError(f"no piece of {fmap.name or 'map'} contains {fraction_text(x)}")

    def eval(self, fmap: PiecewiseMap, x: Fraction) -> Fraction:
        return self.piece_for(fmap, Fraction(x)).value(Fraction(x))

    def orbit(self, fmap: PiecewiseMap, x: Fraction, n: int) -> list[Fraction]:
        """x, f(x), ..., f^n(x)."""
        values = [Fraction(x)]
        for _ in range(n):
            values.append(self.eval(fmap, values[-1]))
        return values

    def preimages(self, fmap: PiecewiseMap, y: Fraction) -> PreimageSet:
        """Solutions of f(x) = y; a constant piece equal to y contributes its whole interval."""
        y = Fraction(y)
        points: set[Fraction] = set()
        intervals: list[RatInterval] = []
        for piece in fmap.pieces:
            if piece.degree == 2:
                raise UnsupportedPieceError(f"preimages need affine pieces; {piece.text} is quadratic")
            if piece.degree == 0:
                if piece.c0 == y:
                    intervals.append(
                        RatInterval(lo=piece.lo, hi=piece.hi, lo_closed=piece.lo_closed, hi_closed=piece.hi_closed)
                    )
                continue
            x = (y - piece.c0) / piece.c1
            if piece.contains(x):
                points.add(x)
        points = {p for p in points if not any(i.contains(p) for i in intervals)}
        return PreimageSet(points=tuple(sorted(points)), intervals=tuple(intervals))

    def image_interval(self, fmap: PiecewiseMap, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """Exact hull of f([lo, hi]) from per-piece ranges on the closed overlaps."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi or not fmap.contains(lo) or not fmap.contains(hi):
            raise DomainError(f"[{fraction_text(lo)}, {fraction_text(hi)}] is not inside the domain")
        bounds: list[Fraction] = []
        for piece in fmap.pieces:
            a, b = max(lo, piece.lo), min(hi, piece.hi)
            if a > b or (a == b and not piece.contains(a)):
                continue
            low, high = piece.range_on(a, b)
            bounds.extend((low, high))
        return min(bounds), max(bounds)

    # ------------------------------------------------------------------
    # Grid helpers
    # ------------------------------------------------------------------

    def box_count(self, fmap: PiecewiseMap, h: Fraction) -> int:
        if not FieldValidators.validate_grid(fmap.width, Fraction(h)):
            raise ValidationError(f"grid width {fraction_text(Fraction(h))} does not divide the domain width")
        return int(fmap.width / Fraction(h))

    def box_of(self, fmap: PiecewiseMap, x: Fraction, h: Fraction) -> int:
        """Index of the box holding x; the last box is closed."""
        count = self.box_count(fmap, h)
        if not fmap.contains(x):
            raise DomainError(f"{fraction_text(Fraction(x))} lies outside the domain")
        return min(math.floor((Fraction(x) - fmap.domain_lo) / Fraction(h)), count - 1)

    def boxes_touching(self, fmap: PiecewiseMap, x: Fraction, h: Fraction) -> set[int]:
        """Closed boxes containing x: two of them when x is an interior grid point."""
        count = self.box_count(fmap, h)
        t = (Fraction(x) - fmap.domain_lo) / Fraction(h)
        if t.denominator == 1 and 0 < t < count:
            return {int(t) - 1, int(t)}
        return {self.box_of(fmap, x, h)}

    def box_bounds(self, fmap: PiecewiseMap, index: int, h: Fraction) -> tuple[Fraction, Fraction]:
        lo = fmap.domain_lo + index * h
        return lo, lo + h

    # ------------------------------------------------------------------
    # Negative limit sets
    # ------------------------------------------------------------------

    def _samples(self, fmap: PiecewiseMap, interval: RatInterval, res: Fraction) -> set[Fraction]:
        """Grid points and box centers lying in an interval preimage."""
        count = self.box_count(fmap, res)
        samples: set[Fraction] = set()
        for i in range(count + 1):
            for x in (fmap.domain_lo + i * res, fmap.domain_lo + (i + Fraction(1, 2)) * res):
                if interval.contains(x) and fmap.contains(x):
                    samples.add(x)
        return samples

    def _preimage_levels(self, fmap: PiecewiseMap, x: Fraction, depth: int, res: Fraction) -> tuple[list[set[Fraction]], dict[Fraction, set[Fraction]]]:
        children: dict[Fraction, set[Fraction]] = {}
        warned = False

        def expand(y: Fraction) -> set[Fraction]:
            nonlocal warned
            if y not in children:
                found = self.preimages(fmap, y)
                kids = set(found.points)
                for interval in found.intervals:
                    if not warned:
                        logger.warning(
                            f"{fmap.name or 'map'}: interval preimage {interval.text} sampled at resolution {fraction_text(res)}"
                        )
                        warned = True
                    kids |= self._samples(fmap, interval, res)
                children[y] = kids
            return children[y]

        levels = [{Fraction(x)}]
        for d in range(1, depth + 1):
            level: set[Fraction] = set()
            for y in levels[-1]:
                level |= expand(y)
            levels.append(level)
            logger.debug(f"Preimage level {d}: {len(level)} node(s)")
        return levels, children

    def _check_tree_args(self, fmap: PiecewiseMap, x: Fraction, depth: int) -> None:
        if depth < 1:
            raise ValidationError("preimage depth must be at least 1")
        if not fmap.contains(Fraction(x)):
            raise DomainError(f"{fraction_text(Fraction(x))} lies outside the domain")
        if not fmap.affine:
            raise UnsupportedPieceError("negative limit sets need affine pieces")

    @timed
    def neg_limit_a1(self, fmap: PiecewiseMap, x: Fraction, depth: int, res: Fraction) -> BoxSet:
        """Boxes hit by the preimage sets at some depth in [D/2, D]."""
        self._check_tree_args(fmap, x, depth)
        levels, _ = self._preimage_levels(fmap, x, depth, res)
        boxes = {self.box_of(fmap, y, res) for d in range(depth // 2, depth + 1) for y in levels[d]}
        return BoxSet(label="A1", h=res, boxes=frozenset(boxes), depth=depth, provenance=Provenance.empirical(depth))

    @timed
    def neg_limit_trajectories(
        self,
        fmap: PiecewiseMap,
        x: Fraction,
        mode: TrajectoryMode,
        depth: int,
        res: Fraction,
    ) -> BoxSet:
        """
        A2: boxes holding a backward branch at every depth from D/2 to D.
        A3: the A2 boxes plus the limits of dead-end preimages hanging off
        those branches at every depth from D/2+1 to D.
        """
        if mode not in ("A2", "A3"):
            raise ValidationError(f"unknown negative limit mode {mode!r}")
        self._check_tree_args(fmap, x, depth)
        levels, children = self._preimage_levels(fmap, x, depth, res)
        half = depth // 2
        branches = self._stable_branches(fmap, levels, children, depth, res)

        boxes = {self.box_of(fmap, y, res) for y in branches[half]}
        if mode == "A3":
            boxes |= self._dead_end_limit_boxes(fmap, branches, children, depth, res)
        return BoxSet(label=mode, h=res, boxes=frozenset(boxes), depth=depth, provenance=Provenance.empirical(depth))

    def _stable_branches(
        self,
        fmap: PiecewiseMap,
        levels: list[set[Fraction]],
        children: dict[Fraction, set[Fraction]],
        depth: int,
        res: Fraction,
    ) -> dict[int, set[Fraction]]:
        """Nodes per depth of the backward branches that keep one box from depth D/2 to D."""
        half = depth // 2

        def same_box(y: Fraction, child: Fraction) -> bool:
            return self.box_of(fmap, y, res) == self.box_of(fmap, child, res)

        stays = {depth: set(levels[depth])}
        for d in range(depth - 1, half - 1, -1):
            stays[d] = {
                y for y in levels[d]
                if any(child in stays[d + 1] and same_box(y, child) for child in children.get(y, ()))
            }
        branches = {half: stays[half]}
        for d in range(half, depth):
            branches[d + 1] = {
                child
                for y in branches[d]
                for child in children.get(y, ())
                if child in stays[d + 1] and same_box(y, child)
            }
        return branches

    def _branch_limit(self, fmap: PiecewiseMap, child: Fraction, res: Fraction) -> Optional[Fraction]:
        """Fixed point of the piece carrying a stable branch, when it lies in the branch's box."""
        piece = self.piece_for(fmap, child)
        if piece.c1 == 1:
            return None
        limit = piece.c0 / (1 - piece.c1)
        if not fmap.contains(limit) or self.box_of(fmap, limit, res) != self.box_of(fmap, child, res):
            return None
        return limit

    def _dead_end_limit_boxes(
        self,
        fmap: PiecewiseMap,
        branches: dict[int, set[Fraction]],
        children: dict[Fraction, set[Fraction]],
        depth: int,
        res: Fraction,
    ) -> set[int]:
        half = depth // 2
        seen: dict[int, set[int]] = {}
        for d in range(half, depth):
            for y in branches[d]:
                onward = [child for child in children.get(y, ()) if child in branches[d + 1]]
                if not onward:
                    continue
                limit = self._branch_limit(fmap, onward[0], res)
                for child in children.get(y, ()):
                    if child in branches[d + 1] or not self.preimages(fmap, child).is_empty:
                        continue
                    piece = self.piece_for(fmap, child)
                    if limit is None or piece.c1 == 0:
                        point = child
                    else:
                        point = (limit - piece.c0) / piece.c1
                    if fmap.contains(point):
                        seen.setdefault(self.box_of(fmap, point, res), set()).add(d + 1)
        required = set(range(half + 1, depth + 1))
        return {box for box, depths in seen.items() if depths >= required}

    # ------------------------------------------------------------------
    # Pseudo-orbits
    # ------------------------------------------------------------------

    def verify_pseudo_orbit_num(self, fmap: PiecewiseMap, po: PseudoOrbitNum) -> NumVerification:
        """Exact check that |f(x_i) - x_(i+1)| < delta for every i."""
        first_failure: Optional[int] = None
        max_jump = Fraction(0)
        for i, (current, following) in enumerate(zip(po.entries, po.entries[1:])):
            jump = abs(self.eval(fmap, current) - following)
            max_jump = max(max_jump, jump)
            if jump >= po.delta and first_failure is None:
                first_failure = i
        if not fmap.contains(po.entries[-1]):
            raise DomainError(f"{fraction_text(po.entries[-1])} lies outside the domain")
        return NumVerification(valid=first_failure is None, first_failure=first_failure, max_jump=max_jump)

    def _snap(self, value: Fraction, grid: Fraction) -> Fraction:
        return math.floor(value / grid) * grid

    def _append(self, entries: list[Fraction], snapped: list[int], value: Fraction, grid: Fraction) -> None:
        if value.denominator.bit_length() > self.max_denominator_bits:
            value = self._snap(value, grid)
            snapped.append(len(entries))
        entries.append(value)
        if len(entries) > self.max_pseudo_orbit_length:
            raise BudgetError(
                f"falsifying pseudo-orbit exceeds {self.max_pseudo_orbit_length} entries",
                details={"max_length": self.max_pseudo_orbit_length},
            )

    def falsification_obligations(
        self,
        fmap: PiecewiseMap,
        epsilon: Fraction,
        delta: Fraction,
        start: Fraction,
        entries: Iterable[Fraction],
    ) -> dict[str, bool]:
        entries = tuple(entries)
        invariant_lo, invariant_hi = self.image_interval(fmap, Fraction(0), Fraction(1))
        ball_lo = max(start - epsilon, fmap.domain_lo)
        ball_hi = min(start + epsilon, fmap.domain_hi)
        return {
            "pseudo_orbit": entries[0] == start
            and self.verify_pseudo_orbit_num(fmap, PseudoOrbitNum(entries=entries, delta=delta)).valid,
            "invariant": invariant_lo >= 0 and invariant_hi <= 1,
            "start_ball": ball_lo >= 0 and ball_hi <= 1,
            "final_separation": entries[-1] < 0 and -entries[-1] > epsilon,
        }

    @timed
    def falsify_shadowing_ex44(
        self,
        fmap: PiecewiseMap,
        epsilon: Fraction = Fraction(1, 3),
        delta: Fraction = Fraction(1, 64),
    ) -> FalsificationCertificate:
        """
        A delta-pseudo-orbit no point epsilon-shadows.

        Square from 3/4 until below delta, jump to 0 and then to -delta/2, and
        follow the left branch until below -3/4. [0, 1] is invariant, so any
        shadow starting within epsilon of 3/4 never leaves it.
        """
        epsilon, delta = Fraction(epsilon), Fraction(delta)
        if not (0 < delta < Fraction(1, 4)):
            raise ValidationError(f"delta must lie in (0, 1/4), got {fraction_text(delta)}")
        start = Fraction(3, 4)
        if not (0 < epsilon <= start):
            raise ValidationError(f"epsilon must lie in (0, 3/4], got {fraction_text(epsilon)}")

        grid = delta / 4
        entries: list[Fraction] = [start]
        snapped: list[int] = []
        while entries[-1] >= delta:
            self._append(entries, snapped, self.eval(fmap, entries[-1]), grid)
        self._append(entries, snapped, Fraction(0), grid)
        self._append(entries, snapped, -delta / 2, grid)
        while entries[-1] >= Fraction(-3, 4):
            self._append(entries, snapped, self.eval(fmap, entries[-1]), grid)
        if snapped:
            logger.warning(f"Snapped {len(snapped)} iterate(s) to the grid {fraction_text(grid)}")

        obligations = self.falsification_obligations(fmap, epsilon, delta, start, entries)
        verification = self.verify_pseudo_orbit_num(fmap, PseudoOrbitNum(entries=tuple(entries), delta=delta))
        certificate = FalsificationCertificate(
            epsilon=epsilon,
            delta=delta,
            start=start,
            entries=tuple(entries),
            snapped=tuple(snapped),
            max_jump=verification.max_jump,
            obligations=obligations,
            mode="snapped" if snapped else "exact",
        )
        logger.info(
            f"Falsification at epsilon={fraction_text(epsilon)}, delta={fraction_text(delta)}: "
            f"{len(entries)} entries, not shadowable={certificate.not_shadowable}"
        )
        return certificate

    def recheck_falsification(self, fmap: PiecewiseMap, certificate: FalsificationCertificate) -> bool:
        """Re-derive all four obligations from the certificate's own data."""
        obligations = self.falsification_obligations(
            fmap, certificate.epsilon, certificate.delta, certificate.start, certificate.entries
        )
        return all(obligations.values())

    # ------------------------------------------------------------------
    # Box graphs
    # ------------------------------------------------------------------

    @timed
    def box_graph(self, fmap: PiecewiseMap, h: Fraction, fatten: Fraction) -> BoxGraph:
        """Edge i -> j iff the fattened exact image of closed box i meets closed box j."""
        h, fatten = Fraction(h), Fraction(fatten)
        if fatten < 0:
            raise ValidationError("fattening must be non-negative")
        count = self.box_count(fmap, h)
        a = fmap.domain_lo
        edges: set[tuple[int, int]] = set()
        for i in range(count):
            lo, hi = self.box_bounds(fmap, i, h)
            image_lo, image_hi = self.image_interval(fmap, lo, hi)
            j_lo = max(math.ceil((image_lo - fatten - a) / h) - 1, 0)
            j_hi = min(math.floor((image_hi + fatten - a) / h), count - 1)
            edges.update((i, j) for j in range(j_lo, j_hi + 1))
        logger.info(f"Box graph at h={fraction_text(h)}: {count} boxes, {len(edges)} edges")
        return BoxGraph(h=h, fatten=fatten, count=count, edges=frozenset(edges))

    def _graph(self, graph: BoxGraph):
        return sorted_digraph(range(graph.count), graph.edges)

    def chain_recurrent_outer(self, fmap: PiecewiseMap, h: Fraction, fatten: Fraction) -> BoxSet:
        """Union of the strongly connected components that carry a cycle."""
        graph = self._graph(self.box_graph(fmap, h, fatten))
        boxes: set[int] = set()
        for component in nontrivial_components(graph):
            boxes |= component
        return BoxSet(label="chain-recurrent", h=Fraction(h), boxes=frozenset(boxes))

    def box_level_ict(self, fmap: PiecewiseMap, points: Iterable[Fraction], h: Fraction, fatten: Fraction) -> bool:
        """Boxes meeting the points induce a strongly connected subgraph with an edge."""
        boxes: set[int] = set()
        for x in points:
            boxes |= self.boxes_touching(fmap, Fraction(x), Fraction(h))
        graph = self._graph(self.box_graph(fmap, h, fatten)).subgraph(sorted(boxes))
        return is_strongly_connected_with_edge(graph)

    def omega_boxes(self, fmap: PiecewiseMap, points: Iterable[Fraction], n: int, h: Fraction) -> BoxSet:
        """Boxes visited by each orbit during steps n/2..n."""
        boxes: set[int] = set()
        for x in points:
            orbit = self.orbit(fmap, Fraction(x), n)
            boxes |= {self.box_of(fmap, y, h) for y in orbit[n // 2:]}
        return BoxSet(label="omega-samples", h=Fraction(h), boxes=frozenset(boxes), depth=n,
                      provenance=Provenance.empirical(n))
