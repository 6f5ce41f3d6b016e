"""
Realize a chain transitive closed set as the limit set of one point.

Stage j walks the block graph of window length min(j+1, L_max) densely,
starting and ending at the least window. Stages past the last one repeat
it, so every built point is eventually periodic and its limit windows are
exact.
"""

import logging
from typing import Optional

import networkx as nx

from app.exceptions import BudgetError, NotChainTransitiveError, ValidationError
from app.schemas.construct import (
    ChainSchedule,
    ConstructionCertificate,
    FullTrajectoryResult,
    LimitPointResult,
    StageWalk,
)
from app.schemas.limits import ClosedSetSpec
from app.schemas.symbolic import PeriodicPoint, TwoSidedPoint, Word, word_text
from app.services.limits_service import LimitsService
from app.services.symbolic_service import cyclic_windows, text_windows
from app.utils.decorators import timed
from app.utils.graphs import bfs_path, canonical_preorder, is_strongly_connected_with_edge, shortest_cycle

logger = logging.getLogger(__name__)


class ConstructService:
    """Dense chain schedules and the points they assemble into."""

    def __init__(self, limits: Optional[LimitsService] = None):
        self.limits = limits or LimitsService()

    def _stage_graph(self, spec: ClosedSetSpec, L: int) -> nx.DiGraph:
        graph = self.limits.spec_block_graph(spec, L).to_networkx()
        if not is_strongly_connected_with_edge(graph):
            raise NotChainTransitiveError(
                f"{spec.name or 'spec'} is not chain transitive at window length {L}",
                details={"window_length": L},
            )
        return graph

    @staticmethod
    def _dense_walk(graph: nx.DiGraph, base: Word) -> tuple[Word, ...]:
        """Closed walk from base visiting every vertex: DFS order, BFS connecting paths."""
        walk = [base]
        visited = {base}
        current = base
        for vertex in canonical_preorder(graph, base):
            if vertex in visited:
                continue
            path = bfs_path(graph, current, vertex)
            walk.extend(path[1:])
            visited.update(path)
            current = vertex
        if current != base:
            walk.extend(bfs_path(graph, current, base)[1:])
        if len(walk) == 1:
            walk = shortest_cycle(graph, base)
        return tuple(walk)

    def dense_chain(self, spec: ClosedSetSpec, k: int, base: Optional[Word] = None) -> tuple[Word, ...]:
        """Closed walk through every vertex of the resolution-k block graph."""
        L = spec.window_length(k)
        graph = self._stage_graph(spec, L)
        if base is None:
            base = min(graph.nodes)
        base = tuple(base)
        if base not in graph:
            raise ValidationError(f"base {word_text(base)} is not a length-{L} window of {spec.name or 'spec'}")
        return self._dense_walk(graph, base)

    def _run_stages(self, spec: ClosedSetSpec, K: int, stream: list[str]) -> ChainSchedule:
        """Append stages 0..J to ``stream`` in place and return the schedule."""
        max_window = spec.window_length(K)
        stages: list[StageWalk] = []
        walk: tuple[Word, ...] = ()
        for j in range(max_window):
            L = min(j + 1, max_window)
            graph = self._stage_graph(spec, L)
            base = min(graph.nodes)
            walk = self._dense_walk(graph, base)

            entry: tuple[Word, ...] = ()
            segment_start = max(len(stream) - L, 0)
            if not stream:
                stream.extend(base)
            else:
                context = tuple(stream[len(stream) - L:])
                path = bfs_path(graph, context, base) if context in graph else None
                if path is None:
                    raise NotChainTransitiveError(
                        f"stage {j} cannot reach its base from {word_text(context)}",
                        details={"stage": j},
                    )
                entry = tuple(path)
                stream.extend(v[-1] for v in path[1:])
            stream.extend(v[-1] for v in walk[1:])
            fused = text_windows(tuple(stream[segment_start:]), L + 1)
            stages.append(
                StageWalk(
                    stage=j,
                    window_length=L,
                    base=base,
                    entry_path=entry,
                    walk=walk,
                    covered=set(walk) == set(graph.nodes),
                    admissible=fused <= spec.windows(L + 1).words,
                )
            )
            logger.debug(f"Stage {j}: window length {L}, {len(walk) - 1} edges, stream {len(stream)}")

        period = tuple(v[-1] for v in walk[1:])
        return ChainSchedule(resolution=K, max_window=max_window, stages=tuple(stages), period=period)

    def _limit_matches(self, spec: ClosedSetSpec, point, kind: str, max_window: int) -> dict[int, bool]:
        return {
            L: self.limits.limit_windows(point, kind, L).words == spec.windows(L).words
            for L in range(1, max_window + 1)
        }

    def _admissible(self, spec: ClosedSetSpec, schedules: list[ChainSchedule], reversed_spec=None) -> bool:
        """Each stage is a chain at its own resolution and each periodic tail lies in the spec."""
        for schedule, target in zip(schedules, (spec, reversed_spec)):
            if not all(stage.admissible for stage in schedule.stages):
                return False
            if not cyclic_windows(schedule.period, schedule.max_window) <= target.windows(schedule.max_window).words:
                return False
        return True

    @timed
    def build_limit_point(self, spec: ClosedSetSpec, K: int, N: int) -> LimitPointResult:
        """One-sided point whose forward limit windows equal the spec's up to resolution K."""
        if K < 0:
            raise ValidationError(f"resolution must be non-negative, got {K}")
        stream: list[str] = []
        schedule = self._run_stages(spec, K, stream)
        if len(stream) > N:
            raise BudgetError(
                f"stage {schedule.final_stage} needs {len(stream)} symbols, budget is {N}",
                details={"needed": len(stream), "budget": N},
            )
        point = PeriodicPoint(transient=tuple(stream), period=schedule.period)
        certificate = ConstructionCertificate(
            resolution=K,
            max_window=schedule.max_window,
            stage_coverage={s.stage: s.covered for s in schedule.stages},
            admissible=self._admissible(spec, [schedule]),
            limit_matches=self._limit_matches(spec, point, "omega", schedule.max_window),
        )
        logger.info(
            f"Built limit point for {spec.name or 'spec'} at K={K}: "
            f"transient {len(stream)}, period {len(schedule.period)}, valid={certificate.valid}"
        )
        return LimitPointResult(point=point, prefix=point.stream(0, N), schedule=schedule, certificate=certificate)

    @timed
    def build_full_trajectory(self, spec: ClosedSetSpec, K: int, N: int) -> FullTrajectoryResult:
        """
        Bi-infinite point whose backward and forward limit windows both equal the spec's.

        Both tails grow outward from a shared central window; the left tail runs
        the same stages on the reversed spec.
        """
        if K < 0:
            raise ValidationError(f"resolution must be non-negative, got {K}")
        max_window = spec.window_length(K)
        context = min(spec.windows(max_window).words)

        right_stream = list(context)
        forward = self._run_stages(spec, K, right_stream)
        left_stream = list(context[::-1])
        mirrored = spec.reversed()
        backward = self._run_stages(mirrored, K, left_stream)

        needed = max(len(right_stream), len(left_stream))
        if needed > N:
            raise BudgetError(
                f"full trajectory needs {needed} symbols per side, budget is {N}",
                details={"needed": needed, "budget": N},
            )

        outward_left = tuple(left_stream[len(context):])
        point = TwoSidedPoint(
            left=PeriodicPoint(side="left", transient=outward_left[::-1], period=backward.period[::-1]),
            center=tuple(right_stream),
            right=PeriodicPoint(period=forward.period),
        )
        coverage = {s.stage: s.covered for s in forward.stages}
        for s in backward.stages:
            coverage[s.stage] = coverage.get(s.stage, True) and s.covered
        certificate = ConstructionCertificate(
            resolution=K,
            max_window=max_window,
            stage_coverage=coverage,
            admissible=self._admissible(spec, [forward, backward], mirrored),
            limit_matches=self._limit_matches(spec, point, "omega", max_window),
            backward_limit_matches=self._limit_matches(spec, point, "alpha", max_window),
        )
        logger.info(f"Built full trajectory for {spec.name or 'spec'} at K={K}: valid={certificate.valid}")
        return FullTrajectoryResult(
            point=point,
            central_window=point.window(-N, 2 * N),
            window_start=-N,
            forward_schedule=forward,
            backward_schedule=backward,
            certificate=certificate,
        )
