import logging
import math
from functools import cached_property
from typing import Final

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import KDTree

from qvista.metric import to_sphere
from .rational_map import RationalMap


class SphereGrid:
    """
    Cells of two stereographic charts, each a size x size square on [-1, 1]^2: chart 0 holds the
    cells centered in |z| <= 1, chart 1 the cells centered in |u| < 1 with u = 1/z. Cells are
    addressed by compact indices 0..count-1.
    """

    def __init__(self, size: int):
        if size < 4:
            raise ValueError(f'grid needs at least 4 cells per side, got {size}')
        self.size: Final[int] = size
        self.step: Final[float] = 2.0 / size
        axis = -1.0 + (np.arange(size) + 0.5) * self.step
        square = (axis[None, :] + 1j * axis[:, None]).ravel()

        chart_a = np.flatnonzero(np.abs(square) <= 1)
        chart_b = np.flatnonzero(np.abs(square) < 1)
        self.cells: Final[np.ndarray] = np.concatenate([chart_a, size * size + chart_b])
        self.charts: Final[np.ndarray] = (self.cells >= size * size).astype(np.int8)
        self.coords: Final[np.ndarray] = square[self.cells % (size * size)]
        self.__compact = np.full(2 * size * size, -1, dtype=np.int64)
        self.__compact[self.cells] = np.arange(self.cells.size)
        with np.errstate(divide='ignore'):
            self.points: Final[np.ndarray] = np.where(self.charts == 0, self.coords, 1 / self.coords)
        logging.info(f'sphere grid {size}x{size} per chart: {self.count} cells')

    @property
    def count(self) -> int:
        return self.cells.size

    @cached_property
    def vectors(self) -> np.ndarray:
        return to_sphere(self.points)

    @cached_property
    def __tree(self) -> KDTree:
        return KDTree(self.vectors)

    def __flat(self, chart: np.ndarray, coord: np.ndarray) -> np.ndarray:
        col = np.clip(np.floor((coord.real + 1) / self.step), 0, self.size - 1).astype(np.int64)
        row = np.clip(np.floor((coord.imag + 1) / self.step), 0, self.size - 1).astype(np.int64)
        return chart.astype(np.int64) * self.size * self.size + row * self.size + col

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Compact index of the cell holding each point of the sphere; infinity belongs to chart 1."""
        points = np.asarray(points, dtype=complex)
        finite = np.isfinite(points)
        inner = finite & (np.abs(points) <= 1)
        with np.errstate(divide='ignore', invalid='ignore'):
            coord = np.where(inner, points, np.where(finite, 1 / np.where(inner | ~finite, 1, points), 0))
        found = self.__compact[self.__flat(np.where(inner, 0, 1), coord)]
        missing = found < 0
        if missing.any():
            _, nearest = self.__tree.query(to_sphere(points[missing]))
            found[missing] = nearest
        return found

    def locate_image(self, g: RationalMap) -> np.ndarray:
        """Cell of g(c) for the center c of every cell."""
        p, q = g.projective(self.points)
        inner = np.abs(p) <= np.abs(q)
        with np.errstate(divide='ignore', invalid='ignore'):
            coord = np.where(inner, p / np.where(inner, q, 1), q / np.where(inner, 1, p))
        found = self.__compact[self.__flat(np.where(inner, 0, 1), coord)]
        missing = found < 0
        if missing.any():
            with np.errstate(divide='ignore', invalid='ignore'):
                values = np.where(np.abs(q[missing]) > 0, p[missing] / q[missing], complex(np.inf, 0))
            _, nearest = self.__tree.query(to_sphere(values))
            found[missing] = nearest
        return found

    @cached_property
    def adjacency(self) -> csr_matrix:
        """Eight-neighbour edges inside each chart plus seam edges between the charts."""
        rows, cols = [], []
        size = self.size
        for chart in (0, 1):
            block = self.__compact[chart * size * size:(chart + 1) * size * size].reshape(size, size)
            for dr, dc in ((0, 1), (1, 0), (1, 1), (1, -1)):
                left, right = max(0, -dc), size - max(0, dc)
                a = block[:size - dr, left:right]
                b = block[dr:, left + dc:right + dc]
                valid = (a >= 0) & (b >= 0)
                rows.append(a[valid])
                cols.append(b[valid])

        seam = np.flatnonzero(np.abs(self.coords) > 1 - 2 * self.step)
        partner = 1 / self.coords[seam]
        other = 1 - self.charts[seam]
        base_col = np.floor((partner.real + 1) / self.step).astype(np.int64)
        base_row = np.floor((partner.imag + 1) / self.step).astype(np.int64)
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                row, col = base_row + dr, base_col + dc
                inside = (row >= 0) & (row < size) & (col >= 0) & (col < size)
                flat = other.astype(np.int64) * size * size + np.clip(row, 0, size - 1) * size + np.clip(col, 0, size - 1)
                target = np.where(inside, self.__compact[flat], -1)
                valid = target >= 0
                rows.append(seam[valid])
                cols.append(target[valid])

        rows, cols = np.concatenate(rows), np.concatenate(cols)
        edges = coo_matrix((np.ones(rows.size, dtype=np.float32), (rows, cols)), shape=(self.count, self.count))
        matrix = (edges + edges.T).tocsr()
        matrix.data[:] = 1.0
        return matrix

    def mask(self, cells: np.ndarray) -> np.ndarray:
        mask = np.zeros(self.count, dtype=bool)
        mask[cells] = True
        return mask

    def dilate(self, mask: np.ndarray) -> np.ndarray:
        return mask | ((self.adjacency @ mask.astype(np.float32)) > 0)

    def components(self, mask: np.ndarray) -> list[np.ndarray]:
        """Connected pieces of a cell set, each as sorted compact indices."""
        cells = np.flatnonzero(mask)
        if not cells.size:
            return []
        count, labels = connected_components(self.adjacency[cells][:, cells], directed=False)
        order = np.argsort(labels, kind='stable')
        return np.split(cells[order], np.cumsum(np.bincount(labels, minlength=count))[:-1])

    def ball(self, center: np.ndarray, radius: float) -> np.ndarray:
        """Cells whose centers lie within spherical distance ``radius`` of a unit vector."""
        if radius >= math.pi:
            return np.ones(self.count, dtype=bool)
        return self.vectors @ center >= math.cos(radius)
