from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from app.config import BUNDLED_CORPUS, Settings
from app.repositories import MapRepository, PointRepository, SftRepository
from app.schemas.limits import WindowSet
from app.schemas.reports import RunConfig
from app.schemas.symbolic import Alphabet, PeriodicPoint, ScheduledPoint, SegmentTemplate, to_word
from app.services.construct_service import ConstructService
from app.services.interval_service import IntervalService
from app.services.limits_service import LimitsService
from app.services.shadowing_service import ShadowingService
from app.services.spec_service import SpecService
from app.services.symbolic_service import SymbolicService
from app.services.witness_service import WitnessService

hypothesis_settings.register_profile(
    "ci",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
hypothesis_settings.load_profile("ci")


# ============================================================================
# Services
# ============================================================================


@pytest.fixture
def symbolic() -> SymbolicService:
    return SymbolicService()


@pytest.fixture
def specs(symbolic) -> SpecService:
    return SpecService(symbolic)


@pytest.fixture
def limits(symbolic) -> LimitsService:
    return LimitsService(symbolic)


@pytest.fixture
def shadowing(symbolic) -> ShadowingService:
    return ShadowingService(symbolic)


@pytest.fixture
def witnesses(limits) -> WitnessService:
    return WitnessService(limits, depth=128)


@pytest.fixture
def construct(limits) -> ConstructService:
    return ConstructService(limits)


@pytest.fixture
def intervals() -> IntervalService:
    return IntervalService()


# ============================================================================
# Corpus
# ============================================================================


@pytest.fixture
def corpus_dir() -> Path:
    return BUNDLED_CORPUS


@pytest.fixture
def sft_repo(corpus_dir, symbolic) -> SftRepository:
    return SftRepository(corpus_dir, symbolic)


@pytest.fixture
def map_repo(corpus_dir, intervals) -> MapRepository:
    return MapRepository(corpus_dir, intervals)


@pytest.fixture
def point_repo(corpus_dir) -> PointRepository:
    return PointRepository(corpus_dir)


@pytest.fixture
def points(point_repo):
    return point_repo.get("points")


@pytest.fixture
def golden_mean(symbolic):
    return symbolic.sft_from_forbidden(Alphabet.of("01"), [to_word("11")], name="golden_mean")


@pytest.fixture
def full2(symbolic):
    return symbolic.sft_from_forbidden(Alphabet.of("01"), [], name="full2")


@pytest.fixture
def full3(symbolic):
    return symbolic.sft_from_forbidden(Alphabet.of("012"), [], name="full3")


@pytest.fixture
def ex31(map_repo):
    return map_repo.get("ex31")


@pytest.fixture
def ex32(map_repo):
    return map_repo.get("ex32")


@pytest.fixture
def ex44(map_repo):
    return map_repo.get("ex44")


# ============================================================================
# Factories
# ============================================================================


@pytest.fixture
def window_set_factory():
    """Factory for window sets given as space-separated words"""
    def create(text: str) -> WindowSet:
        words = [to_word(part) for part in text.split()]
        return WindowSet(L=len(words[0]), words=frozenset(words))
    return create


@pytest.fixture
def spike_point_factory():
    """Factory for 1 0^n spike trains: s 0 s 00 s 000 ..."""
    def create(spike: str = "1", base: str = "0", transient: str = "") -> ScheduledPoint:
        return ScheduledPoint(
            transient=to_word(transient),
            templates=(SegmentTemplate(prefix=to_word(spike), symbol=base, a=1, b=0),),
        )
    return create


@pytest.fixture
def periodic_factory():
    """Factory for eventually periodic one-sided points"""
    def create(period: str, transient: str = "", side: str = "right") -> PeriodicPoint:
        return PeriodicPoint(period=to_word(period), transient=to_word(transient), side=side)
    return create


@pytest.fixture
def run_config_factory(tmp_path):
    """Factory for run configurations writing into a temporary directory"""
    def create(subcommand: str = "test", output_format: str = "csv", **kwargs) -> RunConfig:
        return RunConfig(
            subcommand=subcommand,
            output_dir=str(tmp_path / "out"),
            output_format=output_format,
            **kwargs,
        )
    return create


@pytest.fixture
def test_settings(tmp_path) -> Settings:
    return Settings(_env_file=None, output_dir=tmp_path / "out")
