from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from qvista.covers import CoverSequence, TileId
from qvista.tile_graph import TileGraph
from qvista.util.enum import EnhancedEnum
from .errors import CoverGap, RayViolation


class TieBreak(EnhancedEnum, StrEnum):
    LOWEST = 'lowest'
    HIGHEST = 'highest'


@dataclass(frozen=True)
class NaturalGeodesic:
    point: int
    tiles: tuple[TileId, ...]
    ambiguous_levels: tuple[int, ...]

    @property
    def ambiguous(self) -> bool:
        return bool(self.ambiguous_levels)

    def __len__(self) -> int:
        return len(self.tiles)


def geodesic_indices(cover: CoverSequence, tie_break: TieBreak = TieBreak.LOWEST) -> np.ndarray:
    """[x, n] = index of the level-n tile chosen for point x."""
    indices = np.zeros((cover.space.n, cover.depth + 1), dtype=np.int64)
    for n in range(cover.depth + 1):
        membership = cover.geometry(n).membership
        present = membership.any(axis=0)
        if not present.all():
            raise CoverGap(n, int(np.flatnonzero(~present)[0]))
        if tie_break == TieBreak.LOWEST:
            indices[:, n] = np.argmax(membership, axis=0)
        else:
            indices[:, n] = membership.shape[0] - 1 - np.argmax(membership[::-1], axis=0)
    return indices


def natural_geodesic(cover: CoverSequence, x: int, tie_break: TieBreak = TieBreak.LOWEST) -> NaturalGeodesic:
    if not 0 <= x < cover.space.n:
        raise IndexError(f'point {x} outside a space of {cover.space.n} points')
    tiles, ambiguous = [], []
    for n in range(cover.depth + 1):
        containing = np.flatnonzero(cover.geometry(n).membership[:, x])
        if containing.size == 0:
            raise CoverGap(n, x)
        if containing.size > 1:
            ambiguous.append(n)
        chosen = containing[0] if tie_break == TieBreak.LOWEST else containing[-1]
        tiles.append(TileId(n, int(chosen)))
    return NaturalGeodesic(x, tuple(tiles), tuple(ambiguous))


def require_ray(graph: TileGraph, geodesic: NaturalGeodesic) -> NaturalGeodesic:
    """Raises RayViolation unless consecutive choices form a geodesic ray in the tile graph."""
    vertices = np.array([graph.index(it) for it in geodesic.tiles])
    distances = graph.distances[np.ix_(vertices, vertices)]
    levels = np.arange(len(vertices))
    expected = np.abs(levels[:, None] - levels[None, :])
    wrong = np.argwhere(distances != expected)
    if wrong.size:
        first, second = wrong[0]
        raise RayViolation(geodesic.point, int(first), int(second), int(distances[first, second]))
    return geodesic
