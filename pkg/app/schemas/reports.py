"""
Run configuration and report records shared by the command line surface.
"""

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class RunConfig(BaseModel):
    """Every parameter of one invocation; echoed into each emitted file."""

    model_config = ConfigDict(frozen=True)

    subcommand: str
    inputs: tuple[str, ...] = ()
    resolution: Optional[int] = None
    horizon: Optional[int] = None
    grid: Optional[str] = None
    seed: Optional[int] = None
    output_dir: str = "out"
    output_format: Literal["csv", "json", "dot"] = "csv"
    only: Optional[str] = None
    extra: dict[str, str] = Field(default_factory=dict)

    def header_items(self) -> list[tuple[str, str]]:
        items: list[tuple[str, str]] = [("subcommand", self.subcommand)]
        if self.inputs:
            items.append(("inputs", ";".join(self.inputs)))
        for key in ("resolution", "horizon", "grid", "seed", "only"):
            value = getattr(self, key)
            if value is not None:
                items.append((key, str(value)))
        items.append(("format", self.output_format))
        for key in sorted(self.extra):
            items.append((key, self.extra[key]))
        return items


class CheckResult(BaseModel):
    """One reproduced example claim."""

    model_config = ConfigDict(frozen=True)

    example_id: str
    name: str
    claim: str
    tag: Literal["PAPER", "DERIVED"] = "PAPER"
    computed: str
    passed: bool
    provenance: str = "exact"
    error: Optional[str] = None


class PaperReport(BaseModel):
    """Aggregated example checks ordered by example id."""

    model_config = ConfigDict(frozen=True)

    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failed(self) -> list[str]:
        return [f"{r.example_id}:{r.name}" for r in self.results if not r.passed]


class CommandReport(BaseModel):
    """Text lines for stdout plus artifacts written to the output directory."""

    model_config = ConfigDict(frozen=True)

    lines: tuple[str, ...] = ()
    artifacts: tuple[str, ...] = ()
    data: dict[str, Any] = Field(default_factory=dict)
