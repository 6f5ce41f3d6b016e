"""
Factories for closed-set specs: SFT languages, explicit window families,
spike sets and orbit closures of finitely described points.
"""

import logging
from typing import Iterable, Optional, Sequence

from app.exceptions import EmptySubshiftError, ValidationError
from app.schemas.limits import ClosedSetSpec, Provenance, WindowSet
from app.schemas.symbolic import AnyPoint, SubshiftSFT, TwoSidedPoint, Word
from app.services.symbolic_service import (
    SymbolicService,
    cyclic_windows,
    essential_edges,
    path_language,
    text_windows,
)

logger = logging.getLogger(__name__)


class SpecService:
    """Builds ClosedSetSpec values from the finite descriptions used across the toolkit."""

    def __init__(self, symbolic: Optional[SymbolicService] = None):
        self.symbolic = symbolic or SymbolicService()

    def language_spec(self, sft: SubshiftSFT, two_sided: bool = False) -> ClosedSetSpec:
        return ClosedSetSpec(
            name=sft.name or "sft",
            generator=lambda L: self.symbolic.language(sft, L),
            provenance=Provenance.exact(),
            two_sided=two_sided,
        )

    def windows_spec(self, allowed: WindowSet, two_sided: bool = False, name: str = "") -> ClosedSetSpec:
        """
        The subshift X_W of sequences all of whose L-windows lie in ``allowed``.

        Single-symbol families are lifted to pairs so the overlap graph has
        vertices of length at least one.
        """
        edges = allowed.words
        if allowed.L == 1:
            edges = frozenset(a + b for a in allowed.words for b in allowed.words)
        edges = essential_edges(edges)
        if not edges:
            raise EmptySubshiftError(f"{name or 'window family'} admits no bi-infinite sequence")

        holder: dict[str, ClosedSetSpec] = {}

        def generate(L: int) -> WindowSet:
            words = path_language(edges, L, lambda m: holder["spec"].windows(m).words)
            return WindowSet(L=L, words=words, provenance=allowed.provenance)

        spec = ClosedSetSpec(
            name=name or f"windows(L={allowed.L})",
            generator=generate,
            provenance=allowed.provenance,
            two_sided=two_sided,
        )
        holder["spec"] = spec
        return spec

    def spike_spec(
        self,
        base: str,
        spikes: Iterable[str],
        two_sided: bool = False,
        name: str = "",
    ) -> ClosedSetSpec:
        """Window projection of {b^inf} together with every b^n s b^inf, s a spike symbol."""
        spikes = tuple(sorted(set(spikes)))
        if base in spikes:
            raise ValidationError(f"spike symbols must differ from the base symbol {base}")

        def generate(L: int) -> WindowSet:
            words = {(base,) * L}
            for s in spikes:
                for i in range(L):
                    words.add((base,) * i + (s,) + (base,) * (L - 1 - i))
            return WindowSet(L=L, words=frozenset(words), provenance=Provenance.exact())

        label = name or f"spike({base};{''.join(spikes)})"
        return ClosedSetSpec(name=label, generator=generate, provenance=Provenance.exact(), two_sided=two_sided)

    def orbit_language(self, points: Sequence[AnyPoint], L: int) -> frozenset[Word]:
        """Every L-window of the points together with all their limit windows."""
        words: set[Word] = set()
        for point in points:
            if not point.exact:
                raise ValidationError("orbit closures need exactly described points")
            if isinstance(point, TwoSidedPoint):
                left = point.left.outward
                right = point.right
                text = left.explicit_prefix(L)[::-1] + point.center + right.explicit_prefix(L)
                words |= text_windows(text, L)
                words |= {w[::-1] for w in cyclic_windows(left.limit_cycle(L), L)}
                words |= cyclic_windows(right.limit_cycle(L), L)
            elif point.side == "right":
                words |= text_windows(point.explicit_prefix(L), L)
                words |= cyclic_windows(point.limit_cycle(L), L)
            else:
                outward = point.outward
                words |= {w[::-1] for w in text_windows(outward.explicit_prefix(L), L)}
                words |= {w[::-1] for w in cyclic_windows(outward.limit_cycle(L), L)}
        return frozenset(words)

    def orbit_closure_spec(
        self,
        points: Sequence[AnyPoint],
        two_sided: bool = False,
        name: str = "",
    ) -> ClosedSetSpec:
        """Closure of the shift orbits of the given points."""
        points = tuple(points)
        if not points:
            raise ValidationError("orbit closure of no points is empty")

        def generate(L: int) -> WindowSet:
            return WindowSet(L=L, words=self.orbit_language(points, L), provenance=Provenance.exact())

        logger.debug(f"Orbit closure spec over {len(points)} point(s)")
        return ClosedSetSpec(
            name=name or "orbit-closure",
            generator=generate,
            provenance=Provenance.exact(),
            two_sided=two_sided,
        )

    @staticmethod
    def describe(windows: WindowSet) -> str:
        return f"L={windows.L} [{windows.provenance.tag}] {{{', '.join(windows.texts())}}}"

