"""Repository for JSON point libraries."""

import logging
from typing import Optional

import pydantic
from pydantic import BaseModel, ConfigDict, Field

from app.exceptions import NotFoundError, ParseError, ValidationError
from app.repositories.base_repository import BaseRepository
from app.schemas.shadowing import Direction, PseudoOrbitSym
from app.schemas.symbolic import AnyPoint, Point

logger = logging.getLogger(__name__)


class PseudoOrbitRef(BaseModel):
    """A pseudo-orbit whose entries name points of the same library."""

    model_config = ConfigDict(frozen=True)

    direction: Direction
    delta_exponent: int = Field(..., ge=0)
    entries: tuple[str, ...] = Field(..., min_length=1)
    start_index: Optional[int] = None


class PointLibrary(BaseModel):
    """Named point descriptions plus pseudo-orbits built from them."""

    model_config = ConfigDict(frozen=True)

    name: str = ""
    points: dict[str, Point] = Field(default_factory=dict)
    pseudo_orbits: dict[str, PseudoOrbitRef] = Field(default_factory=dict)

    def point(self, name: str) -> AnyPoint:
        if name not in self.points:
            raise NotFoundError(f"point '{name}'", f"point '{name}' not in library {self.name!r}")
        return self.points[name]

    def pseudo_orbit(self, name: str) -> PseudoOrbitSym:
        if name not in self.pseudo_orbits:
            raise NotFoundError(f"pseudo-orbit '{name}'")
        ref = self.pseudo_orbits[name]
        entries = tuple(self.point(entry) for entry in ref.entries)
        start = ref.start_index
        if start is None:
            start = {"forward": 0, "backward": -(len(entries) - 1), "two_sided": -(len(entries) // 2)}[ref.direction]
        try:
            return PseudoOrbitSym(
                direction=ref.direction,
                entries=entries,
                delta_exponent=ref.delta_exponent,
                start_index=start,
            )
        except pydantic.ValidationError as e:
            raise ValidationError(f"pseudo-orbit '{name}': {e.errors()[0]['msg']}")


class PointRepository(BaseRepository[PointLibrary]):
    """Loads ``.json`` point libraries validated through the point discriminated union."""

    suffix = ".json"

    def parse(self, text: str, source: str = "<text>", name: str = "") -> PointLibrary:
        try:
            library = PointLibrary.model_validate_json(text)
        except pydantic.ValidationError as e:
            error = e.errors()[0]
            location = ".".join(str(part) for part in error["loc"]) or "document"
            raise ParseError(f"{location}: {error['msg']}", source=source)
        if not library.name:
            library = library.model_copy(update={"name": name})
        logger.info(
            f"Loaded point library {library.name!r}: {len(library.points)} point(s), "
            f"{len(library.pseudo_orbits)} pseudo-orbit(s)"
        )
        return library

    def find_point(self, reference: str, default_library: str = "points") -> AnyPoint:
        """``library:point`` or a bare point name looked up in the default library."""
        library, _, point = reference.rpartition(":")
        return self.get(library or default_library).point(point)
