"""Randomized checks of the exact constructions."""

import functools
import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from app.exceptions import EmptySubshiftError
from app.schemas.interval import PseudoOrbitNum
from app.schemas.limits import WindowSet
from app.schemas.symbolic import to_word
from app.services.shadowing_service import agreement_depth

pytestmark = pytest.mark.property

words = st.text(alphabet="01", min_size=7, max_size=7).map(to_word)


class TestShadowingProperties:
    @given(seed=st.integers(min_value=0, max_value=2**32), k=st.integers(min_value=0, max_value=3))
    @pytest.mark.parametrize("direction", ["forward", "backward", "two_sided"])
    def test_random_pseudo_orbits_are_shadowed(self, shadowing, golden_mean, direction, seed, k):
        po = shadowing.random_pseudo_orbit(golden_mean, direction, k + golden_mean.memory, 8, random.Random(seed))
        certificate = shadowing.shadow(golden_mean, po, k)
        assert shadowing.verify_certificate(golden_mean, po, certificate)
        assert certificate.min_depth >= k

    @given(first=words, second=words)
    def test_agreement_is_symmetric(self, first, second):
        assert agreement_depth(first, second, 3, True) == agreement_depth(second, first, 3, True)
        assert agreement_depth(first, second, 6, False) == agreement_depth(second, first, 6, False)

    @given(word=words)
    def test_word_agrees_with_itself(self, word):
        assert agreement_depth(word, word, 6, False) == 6


class TestSpecProperties:
    @given(spikes=st.sets(st.sampled_from("123"), min_size=1))
    def test_spike_specs_are_factorial(self, specs, spikes):
        spec = specs.spike_spec("0", spikes)
        spec.check_factorial(6)
        assert spec.reversed().windows(4).words == spec.windows(4).words

    @pytest.mark.slow
    @given(spikes=st.sets(st.sampled_from("12"), min_size=1), K=st.integers(min_value=0, max_value=2))
    def test_constructed_points_realize_spike_sets(self, construct, specs, spikes, K):
        result = construct.build_limit_point(specs.spike_spec("0", spikes), K, 4096)
        assert result.certificate.valid


class TestIntervalProperties:
    @given(
        numerator=st.integers(min_value=0, max_value=64),
        steps=st.integers(min_value=1, max_value=6),
    )
    def test_unit_interval_is_invariant(self, intervals, ex44, numerator, steps):
        orbit = intervals.orbit(ex44, Fraction(numerator, 64), steps)
        assert all(0 <= y <= 1 for y in orbit)
        po = PseudoOrbitNum(entries=tuple(orbit), delta=Fraction(1, 2**20))
        assert intervals.verify_pseudo_orbit_num(ex44, po).valid

    @given(numerator=st.integers(min_value=-32, max_value=32))
    def test_image_contains_value(self, intervals, ex31, numerator):
        x = Fraction(numerator, 32)
        lo, hi = intervals.image_interval(ex31, x, x)
        assert lo == hi == intervals.eval(ex31, x)


TRANSIENTS = ["".join(p) for n in range(4) for p in itertools.product("01", repeat=n)]
PERIODS = ["".join(p) for n in range(1, 5) for p in itertools.product("01", repeat=n)]


def chain_oracle(family: frozenset, L: int, k: int) -> bool:
    """
    epsilon-chains between sampled points of X_W, searched directly.

    A cylinder of length k+2 counts when some point v^inf s u t w^inf with
    short transients s, t and periods v, w has every L-window in the family.
    Jumps are checked with agreement_depth at resolution k.
    """
    allowed = {"".join(word) for word in family}

    def admissible(text: str) -> bool:
        return all(text[i:i + L] in allowed for i in range(len(text) - L + 1))

    @functools.lru_cache(maxsize=None)
    def extends_right(suffix: str) -> bool:
        return any(admissible(suffix + t + w * (L + 1)) for t in TRANSIENTS for w in PERIODS)

    @functools.lru_cache(maxsize=None)
    def extends_left(prefix: str) -> bool:
        return any(admissible(v * (L + 1) + s + prefix) for s in TRANSIENTS for v in PERIODS)

    cylinders = [
        "".join(u) for u in itertools.product("01", repeat=k + 2)
        if admissible("".join(u)) and extends_left("".join(u[:L])) and extends_right("".join(u[-L:]))
    ]

    def jump_ok(x: str, y: str) -> bool:
        return agreement_depth(to_word(x[1:]), to_word(y[:k + 1]), k, False) >= k

    steps = {x: [y for y in cylinders if jump_ok(x, y)] for x in cylinders}
    for x in cylinders:
        reached: set[str] = set()
        frontier = list(steps[x])
        while frontier:
            y = frontier.pop()
            if y not in reached:
                reached.add(y)
                frontier.extend(steps[y])
        if reached != set(cylinders):
            return False
    return bool(cylinders)


class TestChainTransitivityOracle:
    @pytest.mark.parametrize(
        "text, expected",
        [("00 01 10", True), ("00 11", False), ("00 01 11", False), ("01 10", True)],
    )
    def test_oracle_known_families(self, text, expected):
        family = frozenset(to_word(part) for part in text.split())
        assert chain_oracle(family, 2, 1) is expected

    @pytest.mark.slow
    @pytest.mark.parametrize("L", [1, 2, 3])
    def test_block_graph_matches_chain_search(self, limits, specs, L):
        """Every nonempty window family over {0, 1}: block-graph ICT agrees with the direct chain search"""
        every = sorted(itertools.product("01", repeat=L))
        disagreements = []
        for size in range(1, len(every) + 1):
            for family in itertools.combinations(every, size):
                try:
                    spec = specs.windows_spec(WindowSet(L=L, words=frozenset(family)))
                except EmptySubshiftError:
                    continue
                for k in (1, 2):
                    if limits.is_ict(spec, k) != chain_oracle(frozenset(family), L, k):
                        disagreements.append((family, k))
        assert disagreements == []


class TestHausdorffProperties:
    @pytest.fixture
    def spec_pool(self, specs):
        pool = [specs.spike_spec(base, spikes) for base in "012" for spikes in ("0", "1", "2", "01", "02", "12") if base not in spikes]
        pool.append(specs.windows_spec(WindowSet(L=1, words=frozenset({("0",), ("1",), ("2",)}))))
        return pool

    @given(data=st.data())
    def test_metric_laws(self, limits, spec_pool, data):
        a, b, c = (data.draw(st.sampled_from(spec_pool)) for _ in range(3))
        ab = limits.window_hausdorff(a, b, 4)
        assert ab == limits.window_hausdorff(b, a, 4)
        assert limits.window_hausdorff(a, a, 4).is_zero
        ac = limits.window_hausdorff(a, c, 4).value
        assert ac <= ab.value + limits.window_hausdorff(b, c, 4).value


class TestMonotonicity:
    @given(seed=st.integers(min_value=0, max_value=2**16), k=st.integers(min_value=1, max_value=4))
    def test_shadow_also_works_for_larger_epsilon(self, shadowing, golden_mean, seed, k):
        po = shadowing.random_pseudo_orbit(golden_mean, "forward", k + golden_mean.memory, 6, random.Random(seed))
        certificate = shadowing.shadow(golden_mean, po, k)
        coarser = certificate.model_copy(update={"epsilon_exponent": k - 1})
        assert shadowing.verify_certificate(golden_mean, po, coarser)

    @pytest.mark.parametrize("name", ["ex31", "ex32", "ex44"])
    def test_chain_recurrent_boxes_shrink_under_refinement(self, intervals, map_repo, name):
        fmap = map_repo.get(name)
        h, fatten = Fraction(1, 16), Fraction(1, 32)
        coarse = intervals.chain_recurrent_outer(fmap, h, fatten).boxes
        fine = intervals.chain_recurrent_outer(fmap, h / 2, fatten / 2).boxes
        assert {i // 2 for i in fine} <= coarse


class TestShadowingSuite:
    @pytest.mark.slow
    @pytest.mark.parametrize("direction", ["forward", "backward", "two_sided"])
    def test_seeded_suite(self, shadowing, golden_mean, direction):
        rng = random.Random(2024)
        failures = 0
        for k in range(2, 9):
            for _ in range(500):
                po = shadowing.random_pseudo_orbit(golden_mean, direction, k + golden_mean.memory, 8, rng)
                certificate = shadowing.shadow(golden_mean, po, k)
                failures += not shadowing.verify_certificate(golden_mean, po, certificate)
        assert failures == 0
