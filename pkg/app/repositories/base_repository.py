"""Base repository for corpus files on disk."""

import logging
from pathlib import Path
from typing import Generic, Iterator, TypeVar

from app.exceptions import NotFoundError, ParseError

ModelT = TypeVar("ModelT")

logger = logging.getLogger(__name__)


class BaseRepository(Generic[ModelT]):
    """Generic file-backed repository: one model per file, looked up by name or path."""

    suffix: str = ""

    def __init__(self, root: Path):
        self.root = Path(root)

    def path_for(self, name: str) -> Path:
        """An existing path is used as given; otherwise ``root/name`` with the suffix added."""
        candidate = Path(name)
        if candidate.is_file():
            return candidate
        if candidate.suffix != self.suffix:
            candidate = candidate.with_name(candidate.name + self.suffix)
        return self.root / candidate

    def list_names(self) -> list[str]:
        """Names of every file in the root with this repository's suffix."""
        if not self.root.is_dir():
            return []
        return sorted(path.stem for path in self.root.glob(f"*{self.suffix}"))

    def get(self, name: str) -> ModelT:
        path = self.path_for(name)
        if not path.is_file():
            raise NotFoundError(f"{self.suffix or 'file'} '{name}'", f"{path} not found")
        return self.load(path)

    def load(self, path: Path) -> ModelT:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ParseError(f"cannot read file: {e}", source=str(path))
        logger.debug(f"Loading {path}")
        return self.parse(text, source=str(path), name=Path(path).stem)

    def parse(self, text: str, source: str = "<text>", name: str = "") -> ModelT:
        raise NotImplementedError

    @staticmethod
    def content_lines(text: str) -> Iterator[tuple[int, str]]:
        """(1-based line number, stripped line) for lines that are not blank or comments."""
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield number, line
