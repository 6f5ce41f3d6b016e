"""
Finite-horizon witness checkers for orbital shadowing variants.

A checker searches a bounded range for a witness. Finding none within the
horizon refutes nothing; reports say so explicitly.
"""

import logging
from typing import Literal, Optional, Union

from app.exceptions import NonStabilizedError, ValidationError
from app.schemas.limits import StabilizationPolicy
from app.schemas.shadowing import (
    AsymptoticSchedule,
    PseudoOrbitTail,
    TrajectoryTail,
    VerificationResult,
    WitnessResult,
)
from app.schemas.symbolic import Word
from app.services.limits_service import LimitsService
from app.services.shadowing_service import closeness_window

logger = logging.getLogger(__name__)

Tail = Union[TrajectoryTail, PseudoOrbitTail]
TailDirection = Literal["backward", "forward"]


class WitnessService:
    """Cofinal, eventual strong and limit witnesses for tails of (pseudo-)orbits."""

    def __init__(self, limits: Optional[LimitsService] = None, depth: int = 256):
        self.limits = limits or LimitsService()
        self.depth = depth

    # ------------------------------------------------------------------
    # Tail elements
    # ------------------------------------------------------------------

    def element(self, tail: Tail, index: int, e: int) -> Word:
        """Resolution-e window of the tail's element at ``index``."""
        two = tail.two_sided_metric
        if isinstance(tail, TrajectoryTail):
            return closeness_window(tail.point, index, e, two)
        if tail.explicit is not None:
            return closeness_window(tail.explicit.entry(index), 0, e, two)

        raw = closeness_window(tail.source, index, e, two)
        keep = tail.schedule.truncation(index)
        filler = tail.filler
        if two:
            out = list(raw)
            for t in range(keep + 1, e + 1):
                out[e + t] = filler[(t - keep - 1) % len(filler)]
                out[e - t] = filler[(t - keep - 1) % len(filler)]
            return tuple(out)
        return tuple(
            symbol if t <= keep else filler[(t - keep - 1) % len(filler)]
            for t, symbol in enumerate(raw)
        )

    def _index_range(self, tail: Tail, direction: TailDirection) -> tuple[int, int]:
        """Indices available in the chosen direction, as (nearest, farthest) magnitudes."""
        if isinstance(tail, PseudoOrbitTail) and tail.explicit is not None:
            po = tail.explicit
            if direction == "backward":
                if po.end_index < 0 or po.start_index > 0:
                    raise ValidationError("explicit backward tail must contain index 0")
                return 0, min(self.depth, -po.start_index)
            if po.start_index > 0:
                raise ValidationError("explicit forward tail must start at index 0")
            return 0, min(self.depth, po.end_index)
        return 0, self.depth

    def _projections(self, tail: Tail, e: int, horizon: int, direction: TailDirection) -> list[frozenset[Word]]:
        """projection[N] = windows of elements N..depth steps away from index 0."""
        _, far = self._index_range(tail, direction)
        sign = -1 if direction == "backward" else 1
        accumulated: set[Word] = set()
        projections: list[frozenset[Word]] = [frozenset()] * (horizon + 1)
        for n in range(far, -1, -1):
            accumulated.add(self.element(tail, sign * n, e))
            if n <= horizon:
                projections[n] = frozenset(accumulated)
        return projections

    def _passes(
        self,
        po_tail: Tail,
        traj_tail: Tail,
        epsilon_exponent: int,
        horizon: int,
        k_res: Optional[int],
        direction: TailDirection,
    ) -> list[bool]:
        k_res = epsilon_exponent if k_res is None else k_res
        if k_res < epsilon_exponent:
            raise ValidationError(
                f"resolution {k_res} cannot certify distances below 2^-{epsilon_exponent}"
            )
        if horizon < 0:
            raise ValidationError("horizon must be non-negative")
        if horizon > self.depth:
            raise ValidationError(f"horizon {horizon} exceeds the scan depth {self.depth}")
        pseudo = self._projections(po_tail, k_res, horizon, direction)
        genuine = self._projections(traj_tail, k_res, horizon, direction)
        return [bool(pseudo[n]) and pseudo[n] == genuine[n] for n in range(horizon + 1)]

    # ------------------------------------------------------------------
    # Checkers
    # ------------------------------------------------------------------

    def check_cofinal_orbital_witness(
        self,
        po_tail: Tail,
        traj_tail: Tail,
        epsilon_exponent: int,
        K: int,
        horizon: int,
        k_res: Optional[int] = None,
        direction: TailDirection = "backward",
    ) -> WitnessResult:
        """Least N in [K, horizon] whose tail closures are within 2^-epsilon_exponent."""
        passes = self._passes(po_tail, traj_tail, epsilon_exponent, horizon, k_res, direction)
        for n in range(max(K, 0), horizon + 1):
            if passes[n]:
                return WitnessResult(found=True, value=n, horizon=horizon)
        logger.info(f"No cofinal witness in [{K}, {horizon}]")
        return WitnessResult(found=False, horizon=horizon)

    def check_eventual_strong_orbital_witness(
        self,
        po_tail: Tail,
        traj_tail: Tail,
        epsilon_exponent: int,
        horizon: int,
        k_res: Optional[int] = None,
        direction: TailDirection = "backward",
    ) -> WitnessResult:
        """Least K such that every N in [K, horizon] passes."""
        passes = self._passes(po_tail, traj_tail, epsilon_exponent, horizon, k_res, direction)
        if not passes[horizon]:
            return WitnessResult(found=False, horizon=horizon)
        K = horizon
        while K > 0 and passes[K - 1]:
            K -= 1
        return WitnessResult(found=True, value=K, horizon=horizon)

    def tail_limit_windows(
        self,
        tail: Tail,
        L: int,
        policy: Optional[StabilizationPolicy] = None,
        direction: TailDirection = "backward",
    ) -> frozenset[Word]:
        """Length-L windows recurring at the far end of a tail."""
        policy = policy or self.limits.policy
        if isinstance(tail, TrajectoryTail):
            kind = "alpha" if direction == "backward" else "omega"
            return self.limits.limit_windows(tail.point, kind, L, policy).words

        _, far = self._index_range(tail, direction)
        sign = -1 if direction == "backward" else 1

        def scan(n: int) -> frozenset[Word]:
            return frozenset(self._leading(tail, sign * i, L) for i in range(n // 2, n))

        n = max(policy.initial, 2)
        limit = min(policy.budget, far + 1)
        if n > limit:
            raise NonStabilizedError(f"tail has fewer than {n} entries to scan", details={"L": L})
        current = scan(n)
        while True:
            if 2 * n > limit:
                raise NonStabilizedError(
                    f"tail windows of length {L} did not stabilize within {limit} entries",
                    details={"L": L, "last_range": n},
                )
            following = scan(2 * n)
            if following == current:
                return following
            current = following
            n *= 2

    def _leading(self, tail: Tail, index: int, L: int) -> Word:
        """Symbols 0..L-1 of the element at ``index``."""
        wide = self.element(tail, index, L - 1)
        return wide[L - 1:] if tail.two_sided_metric else wide

    def check_backward_orbital_limit_witness(
        self,
        po_tail: Tail,
        traj_tail: Tail,
        L: int,
        policy: Optional[StabilizationPolicy] = None,
    ) -> bool:
        """Whether the backward limit windows of both tails agree at length L."""
        return self.tail_limit_windows(po_tail, L, policy) == self.tail_limit_windows(traj_tail, L, policy)

    def check_forward_orbital_limit_witness(
        self,
        po_tail: Tail,
        traj_tail: Tail,
        L: int,
        policy: Optional[StabilizationPolicy] = None,
    ) -> bool:
        return (
            self.tail_limit_windows(po_tail, L, policy, "forward")
            == self.tail_limit_windows(traj_tail, L, policy, "forward")
        )

    def verify_asymptotic(
        self,
        tail: PseudoOrbitTail,
        schedule: AsymptoticSchedule,
        horizon: int,
        direction: TailDirection = "backward",
    ) -> VerificationResult:
        """Check the jump at each index within the horizon against the schedule's bound."""
        indices = range(-horizon, 0) if direction == "backward" else range(0, horizon)
        checked = 0
        for i in indices:
            r = schedule.required(i)
            shifted = self._shifted_element(tail, i, r)
            following = self.element(tail, i + 1, r)
            checked += 1
            if shifted != following:
                return VerificationResult(valid=False, first_failure=i, checked=checked)
        return VerificationResult(valid=True, checked=checked)

    def _shifted_element(self, tail: PseudoOrbitTail, index: int, r: int) -> Word:
        """Resolution-r window of shift(x_index)."""
        two = tail.two_sided_metric
        wide = self.element(tail, index, r + 1)
        if two:
            return wide[2:]
        return wide[1:]
