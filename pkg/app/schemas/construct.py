"""
Stage schedules and certificates produced by the limit-set construction.
"""

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.symbolic import PeriodicPoint, TwoSidedPoint, Word, WordField


class StageWalk(BaseModel):
    """Closed walk of one stage in the block graph of its window length."""

    model_config = ConfigDict(frozen=True)

    stage: int = Field(..., ge=0)
    window_length: int = Field(..., ge=1)
    base: WordField
    entry_path: tuple[Word, ...] = ()
    walk: tuple[Word, ...]
    covered: bool
    admissible: bool = True

    @property
    def edges(self) -> int:
        return len(self.walk) - 1


class ChainSchedule(BaseModel):
    """Stages 0..J; every stage past J repeats stage J."""

    model_config = ConfigDict(frozen=True)

    resolution: int = Field(..., ge=0)
    max_window: int = Field(..., ge=1)
    stages: tuple[StageWalk, ...]
    period: WordField

    @property
    def final_stage(self) -> int:
        return self.max_window - 1


class ConstructionCertificate(BaseModel):
    """Evidence that the built tail realizes the target windows at every certified length."""

    model_config = ConfigDict(frozen=True)

    resolution: int
    max_window: int
    stage_coverage: dict[int, bool]
    admissible: bool
    limit_matches: dict[int, bool]
    backward_limit_matches: dict[int, bool] = Field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return (
            self.admissible
            and all(self.stage_coverage.values())
            and all(self.limit_matches.values())
            and all(self.backward_limit_matches.values())
        )


class LimitPointResult(BaseModel):
    """A one-sided point whose forward limit windows match the target."""

    model_config = ConfigDict(frozen=True)

    point: PeriodicPoint
    prefix: WordField
    schedule: ChainSchedule
    certificate: ConstructionCertificate


class FullTrajectoryResult(BaseModel):
    """A bi-infinite point whose backward and forward limit windows match the target."""

    model_config = ConfigDict(frozen=True)

    point: TwoSidedPoint
    central_window: WordField
    window_start: int
    forward_schedule: ChainSchedule
    backward_schedule: ChainSchedule
    certificate: ConstructionCertificate
