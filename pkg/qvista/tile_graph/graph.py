import logging
from functools import cached_property
from typing import Any, Final

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import shortest_path

from qvista.covers import CoverSequence, TileId
from .errors import TileGraphError, UnknownVertex


class TileGraph:
    """
    All tiles of a cover as vertices; distinct tiles are adjacent when they intersect and their
    levels differ by at most one. Vertex 0 is the root tile.
    """

    def __init__(self, cover: CoverSequence):
        self.cover: Final[CoverSequence] = cover
        self.vertices: Final[tuple[TileId, ...]] = tuple(tile.id for tile in cover.tiles())
        self.offsets: Final[tuple[int, ...]] = tuple(np.cumsum([0] + [len(it) for it in cover.levels]).tolist())
        self.levels: Final[np.ndarray] = np.array([it.level for it in self.vertices], dtype=np.int64)
        self.adjacency: Final[csr_matrix] = self.__build_adjacency()
        logging.info(f'tile graph: {self.size} vertices, {self.adjacency.nnz // 2} edges')

    def __build_adjacency(self) -> csr_matrix:
        rows, cols = [], []
        for n in range(self.cover.depth + 1):
            same = np.triu(self.cover.geometry(n).intersects, k=1)
            i, j = np.nonzero(same)
            rows.append(i + self.offsets[n])
            cols.append(j + self.offsets[n])
            if n < self.cover.depth:
                i, j = np.nonzero(self.cover.cross_intersections(n, n + 1))
                rows.append(i + self.offsets[n])
                cols.append(j + self.offsets[n + 1])
        rows = np.concatenate(rows) if rows else np.empty(0, dtype=int)
        cols = np.concatenate(cols) if cols else np.empty(0, dtype=int)
        edges = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(self.size, self.size))
        return (edges + edges.T).tocsr()

    @property
    def size(self) -> int:
        return len(self.vertices)

    def index(self, tile_id: TileId) -> int:
        if not 0 <= tile_id.level <= self.cover.depth \
                or not 0 <= tile_id.index < self.offsets[tile_id.level + 1] - self.offsets[tile_id.level]:
            raise UnknownVertex(f'no vertex {tile_id}')
        return self.offsets[tile_id.level] + tile_id.index

    def vertex(self, index: int) -> TileId:
        if not 0 <= index < self.size:
            raise UnknownVertex(f'no vertex with index {index}')
        return self.vertices[index]

    @cached_property
    def distances(self) -> np.ndarray:
        lengths = shortest_path(self.adjacency, directed=False, unweighted=True)
        if not np.all(np.isfinite(lengths)):
            raise TileGraphError('tile graph is not connected')
        lengths = lengths.astype(np.int64)
        lengths.setflags(write=False)
        return lengths

    @cached_property
    def doubled_products(self) -> np.ndarray:
        """2 (X.Y) = |X| + |Y| - |X - Y| with the root as base point."""
        doubled = self.levels[:, None] + self.levels[None, :] - self.distances
        doubled.setflags(write=False)
        return doubled

    def distance(self, x: TileId, y: TileId) -> int:
        return int(self.distances[self.index(x), self.index(y)])

    def to_json_dict(self) -> dict[str, Any]:
        upper = coo_matrix(self.adjacency)
        edges = sorted((int(a), int(b)) for a, b in zip(upper.row, upper.col) if a < b)
        return {
            'vertices': [{'level': it.level, 'tile': it.index} for it in self.vertices],
            'edges': [list(it) for it in edges],
        }


def build_tile_graph(cover: CoverSequence) -> TileGraph:
    return TileGraph(cover)


def gromov_product(graph: TileGraph, x: TileId, y: TileId) -> float:
    return graph.doubled_products[graph.index(x), graph.index(y)] / 2
