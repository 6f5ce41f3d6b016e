"""Repository layer for corpus files."""

from app.repositories.base_repository import BaseRepository
from app.repositories.map_repository import MapRepository
from app.repositories.point_repository import PointLibrary, PointRepository, PseudoOrbitRef
from app.repositories.sft_repository import SftRepository

__all__ = [
    'BaseRepository',
    'MapRepository',
    'PointLibrary',
    'PointRepository',
    'PseudoOrbitRef',
    'SftRepository',
]
