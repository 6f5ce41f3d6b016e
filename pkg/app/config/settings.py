import logging
from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


BUNDLED_CORPUS = Path(__file__).resolve().parent.parent / "corpus"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="LIMITSETS_",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    log_level: str = "INFO"

    # Analysis defaults
    default_resolution: int = 3
    horizon: int = 64
    witness_depth: int = 256
    stabilization_initial: int = 64
    stabilization_budget: int = 65536
    seed: int = 2024

    # Interval arithmetic
    max_denominator_bits: int = 4096
    max_pseudo_orbit_length: int = 256

    # Output
    output_dir: Path = Path("out")
    output_format: str = "csv"
    corpus_dir: Path = BUNDLED_CORPUS

    # Parallel example checks
    jobs: int = 1

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_level(cls, v: Any) -> Any:
        if isinstance(v, str):
            v = v.strip().upper()
            if not isinstance(logging.getLevelName(v), int):
                raise ValueError(f"Unknown log level: {v}")
        return v

    @field_validator("output_format", mode="before")
    @classmethod
    def normalize_format(cls, v: Any) -> Any:
        if isinstance(v, str):
            v = v.strip().lower()
            if v not in ("csv", "json", "dot"):
                raise ValueError(f"Unknown output format: {v}")
        return v

    @field_validator(
        "default_resolution",
        "horizon",
        "witness_depth",
        "stabilization_initial",
        "stabilization_budget",
        "max_denominator_bits",
        "max_pseudo_orbit_length",
        "jobs",
    )
    @classmethod
    def positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v


@lru_cache()
def get_settings() -> Settings:
    return Settings()
