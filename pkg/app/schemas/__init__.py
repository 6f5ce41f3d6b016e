"""Data schemas - immutable pydantic models"""
from app.schemas.construct import (
    ChainSchedule,
    ConstructionCertificate,
    FullTrajectoryResult,
    LimitPointResult,
    StageWalk,
)
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
)
from app.schemas.limits import ClosedSetSpec, Dyadic, Provenance, StabilizationPolicy, WindowSet
from app.schemas.reports import CheckResult, CommandReport, PaperReport, RunConfig
from app.schemas.shadowing import (
    AsymptoticSchedule,
    PseudoOrbitSym,
    PseudoOrbitTail,
    ShadowCertificate,
    TrajectoryTail,
    VerificationResult,
    WitnessResult,
)
from app.schemas.symbolic import (
    Alphabet,
    BlockGraph,
    FinitePoint,
    PeriodicPoint,
    ScheduledPoint,
    SegmentTemplate,
    SubshiftSFT,
    TwoSidedPoint,
    Word,
    to_word,
    word_text,
)

__all__ = [
    'Alphabet', 'BlockGraph', 'FinitePoint', 'PeriodicPoint', 'ScheduledPoint',
    'SegmentTemplate', 'SubshiftSFT', 'TwoSidedPoint', 'Word', 'to_word', 'word_text',
    'ClosedSetSpec', 'Dyadic', 'Provenance', 'StabilizationPolicy', 'WindowSet',
    'AsymptoticSchedule', 'PseudoOrbitSym', 'PseudoOrbitTail', 'ShadowCertificate',
    'TrajectoryTail', 'VerificationResult', 'WitnessResult',
    'ChainSchedule', 'ConstructionCertificate', 'FullTrajectoryResult', 'LimitPointResult',
    'StageWalk',
    'BoxGraph', 'BoxSet', 'FalsificationCertificate', 'NumVerification', 'Piece',
    'PiecewiseMap', 'PreimageSet', 'PseudoOrbitNum', 'RatInterval',
    'CheckResult', 'CommandReport', 'PaperReport', 'RunConfig',
]
