"""
Alpha-, omega- and gamma-limit window sets, internal chain transitivity at
finite resolution and the window-level Hausdorff bound.
"""

import logging
from typing import Literal, Optional

import networkx as nx

from app.exceptions import NonStabilizedError, ValidationError
from app.schemas.limits import ClosedSetSpec, Dyadic, Provenance, StabilizationPolicy, WindowSet
from app.schemas.symbolic import AnyPoint, BlockGraph, SubshiftSFT, TwoSidedPoint, Word, word_text
from app.services.spec_service import SpecService
from app.services.symbolic_service import SymbolicService, cyclic_windows, text_windows
from app.utils.graphs import is_strongly_connected_with_edge, nontrivial_components

logger = logging.getLogger(__name__)

LimitKind = Literal["alpha", "omega", "gamma"]


class LimitsService:
    """Limit sets of finitely described points as resolution-indexed window sets."""

    def __init__(
        self,
        symbolic: Optional[SymbolicService] = None,
        policy: Optional[StabilizationPolicy] = None,
    ):
        self.symbolic = symbolic or SymbolicService()
        self.specs = SpecService(self.symbolic)
        self.policy = policy or StabilizationPolicy()

    # ------------------------------------------------------------------
    # Limit windows
    # ------------------------------------------------------------------

    def _scan(self, tail, L: int, policy: StabilizationPolicy) -> WindowSet:
        """Doubling scan: windows inside [n/2, n) until two successive prefixes agree."""

        def scan_windows(n: int) -> frozenset[Word]:
            return text_windows(tail.stream(n // 2, n), L)

        n = max(policy.initial, 2 * L)
        length = tail.length
        current: Optional[frozenset[Word]] = None
        while True:
            if 2 * n > policy.budget or (length is not None and 2 * n > length):
                raise NonStabilizedError(
                    f"length-{L} windows did not stabilize within {min(policy.budget, length or policy.budget)} symbols",
                    details={"L": L, "last_prefix": n, "budget": policy.budget},
                )
            if current is None:
                current = scan_windows(n)
            following = scan_windows(2 * n)
            if current == following:
                logger.debug(f"Length-{L} windows stabilized at cutoff {2 * n}")
                return WindowSet(L=L, words=following, provenance=Provenance.empirical(2 * n))
            current = following
            n *= 2

    def _tail_windows(self, tail, L: int, policy: StabilizationPolicy) -> WindowSet:
        """Windows recurring in a right-reading tail."""
        if L < 1:
            raise ValidationError(f"window length must be positive, got {L}")
        if policy.mode == "auto" and tail.exact:
            return WindowSet(L=L, words=cyclic_windows(tail.limit_cycle(L), L), provenance=Provenance.exact())
        return self._scan(tail, L, policy)

    def omega_windows(self, p: AnyPoint, L: int, policy: Optional[StabilizationPolicy] = None) -> WindowSet:
        """L-words occurring infinitely often in the right tail."""
        policy = policy or self.policy
        if isinstance(p, TwoSidedPoint):
            tail = p.right
        elif p.side == "right":
            tail = p
        else:
            raise ValidationError("a left tail has no forward limit set")
        return self._tail_windows(tail, L, policy)

    def alpha_windows(self, p: AnyPoint, L: int, policy: Optional[StabilizationPolicy] = None) -> WindowSet:
        """L-words occurring infinitely often in the left tail, in reading order."""
        policy = policy or self.policy
        if isinstance(p, TwoSidedPoint):
            tail = p.left
        elif p.side == "left":
            tail = p
        else:
            raise ValidationError("a right tail has no backward limit set")
        return self._tail_windows(tail.outward, L, policy).reversed()

    def gamma_windows(self, p: AnyPoint, L: int, policy: Optional[StabilizationPolicy] = None) -> WindowSet:
        if not isinstance(p, TwoSidedPoint):
            raise ValidationError("gamma-limit windows need a two-sided point")
        return self.alpha_windows(p, L, policy).intersection(self.omega_windows(p, L, policy))

    def limit_windows(
        self,
        p: AnyPoint,
        kind: LimitKind,
        L: int,
        policy: Optional[StabilizationPolicy] = None,
    ) -> WindowSet:
        if kind == "omega":
            return self.omega_windows(p, L, policy)
        if kind == "alpha":
            return self.alpha_windows(p, L, policy)
        return self.gamma_windows(p, L, policy)

    def limit_spec(
        self,
        p: AnyPoint,
        kind: LimitKind,
        policy: Optional[StabilizationPolicy] = None,
        two_sided: Optional[bool] = None,
    ) -> ClosedSetSpec:
        """Spec whose generator is the chosen limit-window operation."""
        policy = policy or self.policy
        exact = p.exact and policy.mode == "auto"
        if two_sided is None:
            two_sided = isinstance(p, TwoSidedPoint)
        return ClosedSetSpec(
            name=f"{kind}-limit",
            generator=lambda L: self.limit_windows(p, kind, L, policy),
            provenance=Provenance.exact() if exact else Provenance.empirical(),
            two_sided=two_sided,
        )

    # ------------------------------------------------------------------
    # Internal chain transitivity
    # ------------------------------------------------------------------

    def spec_block_graph(self, spec: ClosedSetSpec, L: int) -> BlockGraph:
        return self.symbolic.block_graph(spec.windows(L), extension=spec.windows(L + 1))

    def is_ict(self, spec: ClosedSetSpec, k: int) -> bool:
        """Strong connectivity, with at least one edge, of the block graph at resolution k."""
        if k < 0:
            raise ValidationError(f"resolution must be non-negative, got {k}")
        graph = self.spec_block_graph(spec, spec.window_length(k)).to_networkx()
        return is_strongly_connected_with_edge(graph)

    def is_ict_upto(self, spec: ClosedSetSpec, K: int) -> Optional[int]:
        """First resolution k <= K at which the spec is not chain transitive, if any."""
        for k in range(K + 1):
            if not self.is_ict(spec, k):
                return k
        return None

    def enumerate_maximal_ict_spec(self, spec: ClosedSetSpec, k: int) -> list[WindowSet]:
        L = spec.window_length(k)
        windows = spec.windows(L)
        graph = self.spec_block_graph(spec, L).to_networkx()
        return [
            WindowSet(L=L, words=component, provenance=windows.provenance)
            for component in nontrivial_components(graph)
        ]

    def enumerate_maximal_ict(self, sft: SubshiftSFT, k: int, two_sided: bool = False) -> list[WindowSet]:
        """Resolution-k maximal chain transitive classes of an SFT."""
        if k < 1:
            raise ValidationError(f"resolution must be at least 1, got {k}")
        classes = self.enumerate_maximal_ict_spec(self.specs.language_spec(sft, two_sided), k)
        logger.info(f"{sft.name or 'sft'}: {len(classes)} maximal chain transitive class(es) at k={k}")
        return classes

    def chain_component_check(
        self,
        w: WindowSet,
        ambient: SubshiftSFT,
        k: Optional[int] = None,
        two_sided: bool = False,
    ) -> bool:
        """Whether all words of w lie in one strongly connected component of the ambient graph."""
        L = w.L
        if k is not None:
            expected = 2 * k + 1 if two_sided else k + 1
            if expected != L:
                raise ValidationError(f"resolution {k} needs windows of length {expected}, got {L}")
        language = self.symbolic.language(ambient, L)
        outside = w.words - language.words
        if outside:
            raise ValidationError(
                f"windows outside the ambient language: {', '.join(sorted(map(word_text, outside)))}"
            )
        if w.is_empty:
            return True
        graph = self.symbolic.block_graph(language, extension=self.symbolic.language(ambient, L + 1)).to_networkx()
        first = min(w.words)
        component = next(c for c in nx.strongly_connected_components(graph) if first in c)
        return w.words <= component

    # ------------------------------------------------------------------
    # Hausdorff bound
    # ------------------------------------------------------------------

    def window_hausdorff(self, a: ClosedSetSpec, b: ClosedSetSpec, k_max: int) -> Dyadic:
        """
        Upper bound on the Hausdorff distance from window agreement.

        Zero when the projections agree at every resolution up to k_max,
        otherwise 2^-(k-1) for the first disagreeing resolution k (1 if k = 0).
        """
        if a.two_sided != b.two_sided:
            raise ValidationError("cannot compare one-sided and two-sided specs")
        for k in range(k_max + 1):
            L = a.window_length(k)
            if a.windows(L).words != b.windows(L).words:
                return Dyadic.power(max(k - 1, 0))
        return Dyadic.zero()
