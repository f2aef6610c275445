import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Final, Iterable, Sequence, Self

import numpy as np

from qvista.metric import FiniteMetricSpace
from .errors import CoverError, EmptyTile, NotACover, RootLevelError, UnknownTile


@dataclass(frozen=True, order=True)
class TileId:
    level: int
    index: int

    def __str__(self) -> str:
        return f'{self.level}:{self.index}'

    def as_list(self) -> list[int]:
        return [self.level, self.index]


@dataclass(frozen=True, eq=False)
class Tile:
    id: TileId
    members: np.ndarray

    @property
    def level(self) -> int:
        return self.id.level

    def __len__(self) -> int:
        return int(self.members.size)

    def __contains__(self, point: int) -> bool:
        position = np.searchsorted(self.members, point)
        return bool(position < self.members.size and self.members[position] == point)


def _as_matrix(boolean: np.ndarray) -> np.ndarray:
    return boolean.astype(np.float32)


class LevelGeometry:
    """Set geometry of one cover level: tile diameters, tile distances and U_w neighbourhoods."""

    def __init__(self, space: FiniteMetricSpace, tiles: Sequence[Tile]):
        self.space: Final = space
        self.tiles: Final = tuple(tiles)
        self.__lock: Final = threading.RLock()
        self.__reach: dict[int, np.ndarray] = {}
        self.__meets: dict[int, np.ndarray] = {}

    @property
    def size(self) -> int:
        return len(self.tiles)

    @cached_property
    def membership(self) -> np.ndarray:
        matrix = np.zeros((self.size, self.space.n), dtype=bool)
        for row, tile in enumerate(self.tiles):
            matrix[row, tile.members] = True
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def flat_members(self) -> tuple[np.ndarray, np.ndarray]:
        members = np.concatenate([tile.members for tile in self.tiles])
        offsets = np.cumsum([0] + [len(tile) for tile in self.tiles[:-1]])
        return members, offsets

    @cached_property
    def diameters(self) -> np.ndarray:
        d = self.space.dist
        return np.array([d[np.ix_(tile.members, tile.members)].max() for tile in self.tiles])

    @cached_property
    def distances(self) -> np.ndarray:
        members, offsets = self.flat_members
        out = np.empty((self.size, self.size))
        for row, tile in enumerate(self.tiles):
            nearest = self.space.dist[tile.members].min(axis=0)
            out[row] = np.minimum.reduceat(nearest[members], offsets)
        return np.minimum(out, out.T)

    @cached_property
    def intersects(self) -> np.ndarray:
        membership = _as_matrix(self.membership)
        return (membership @ membership.T) > 0

    def reach(self, w: int) -> np.ndarray:
        """reach[X, Y] iff a chain of intersecting tiles of length at most w joins X to Y."""
        with self.__lock:
            if w not in self.__reach:
                current = np.eye(self.size, dtype=bool)
                adjacency = _as_matrix(self.intersects)
                for _ in range(w):
                    grown = (_as_matrix(current) @ adjacency) > 0
                    if np.array_equal(grown, current):
                        break
                    current = grown
                self.__reach[w] = current
            return self.__reach[w]

    def neighbourhood_points(self, w: int) -> np.ndarray:
        return (_as_matrix(self.reach(w)) @ _as_matrix(self.membership)) > 0

    def meets(self, w: int) -> np.ndarray:
        """meets[X, Y] iff U_w(X) and U_w(Y) share a point."""
        with self.__lock:
            if w not in self.__meets:
                points = _as_matrix(self.neighbourhood_points(w))
                self.__meets[w] = (points @ points.T) > 0
            return self.__meets[w]

    def separated(self, w: int) -> np.ndarray:
        return ~self.meets(w)


class CoverSequence:
    """
    Tile families X^0..X^N over a finite metric space, truncated at depth N.

    Level 0 must be the single tile holding every point; every level must cover the space.
    """

    def __init__(self,
                 space: FiniteMetricSpace,
                 levels: Sequence[Sequence[Iterable[int]]],
                 width: int = 0,
                 visual_parameter: float | None = None):
        if width < 0:
            raise CoverError(f'width must be non-negative, got {width}')
        if visual_parameter is not None and visual_parameter <= 1:
            raise CoverError(f'visual parameter must exceed 1, got {visual_parameter}')
        if not levels:
            raise RootLevelError('a cover sequence needs at least the root level')

        self.space: Final[FiniteMetricSpace] = space
        self.width: Final[int] = width
        self.visual_parameter: Final[float | None] = visual_parameter
        self.levels: Final[tuple[tuple[Tile, ...], ...]] = tuple(
            self.__build_level(n, family) for n, family in enumerate(levels))
        self.__geometry: dict[int, LevelGeometry] = {}
        self.__lock = threading.Lock()

        root = self.levels[0]
        if len(root) != 1 or len(root[0]) != space.n:
            raise RootLevelError('level 0 must consist of the whole point set')

    def __build_level(self, n: int, family: Sequence[Iterable[int]]) -> tuple[Tile, ...]:
        tiles = []
        covered = np.zeros(self.space.n, dtype=bool)
        for index, members in enumerate(family):
            members = np.unique(np.asarray(list(members), dtype=int))
            if members.size == 0:
                raise EmptyTile(n, index)
            if members[0] < 0 or members[-1] >= self.space.n:
                raise CoverError(f'tile {n}:{index} refers to points outside the space')
            members.setflags(write=False)
            covered[members] = True
            tiles.append(Tile(TileId(n, index), members))
        if not covered.all():
            raise NotACover(n, int(np.flatnonzero(~covered)[0]))
        return tuple(tiles)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> tuple[Tile, ...]:
        return self.levels[n]

    def tile(self, tile_id: TileId) -> Tile:
        if not 0 <= tile_id.level <= self.depth or not 0 <= tile_id.index < len(self.levels[tile_id.level]):
            raise UnknownTile(f'no tile {tile_id} in a cover of depth {self.depth}')
        return self.levels[tile_id.level][tile_id.index]

    def tiles(self) -> Iterable[Tile]:
        for family in self.levels:
            yield from family

    def geometry(self, n: int) -> LevelGeometry:
        with self.__lock:
            if n not in self.__geometry:
                self.__geometry[n] = LevelGeometry(self.space, self.levels[n])
            return self.__geometry[n]

    def cross_intersections(self, n: int, m: int) -> np.ndarray:
        """[X, Y] iff the n-tile X meets the m-tile Y."""
        upper = _as_matrix(self.geometry(n).membership)
        lower = _as_matrix(self.geometry(m).membership)
        return (upper @ lower.T) > 0

    def member_lists(self) -> list[list[list[int]]]:
        return [[tile.members.tolist() for tile in family] for family in self.levels]

    def with_width(self, width: int) -> Self:
        return CoverSequence(self.space, self.member_lists(), width, self.visual_parameter)

    def with_space(self, space: FiniteMetricSpace) -> Self:
        if space.n != self.space.n:
            raise CoverError(f'cannot rebind a cover of {self.space.n} points to {space.n} points')
        return CoverSequence(space, self.member_lists(), self.width, self.visual_parameter)

    def with_visual_parameter(self, visual_parameter: float | None) -> Self:
        return CoverSequence(self.space, self.member_lists(), self.width, visual_parameter)

    def truncated(self, depth: int) -> Self:
        return CoverSequence(self.space, self.member_lists()[:depth + 1], self.width, self.visual_parameter)


def u_w_neighborhood(cover: CoverSequence, tile_id: TileId, w: int) -> frozenset[TileId]:
    cover.tile(tile_id)
    reach = cover.geometry(tile_id.level).reach(w)[tile_id.index]
    return frozenset(TileId(tile_id.level, int(i)) for i in np.flatnonzero(reach))
