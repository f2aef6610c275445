import logging
from dataclasses import dataclass

import numpy as np

from qvista.covers import CoverSequence, MissingLambda
from qvista.metric import FiniteMetricSpace
from qvista.tile_graph import TileGraph
from .geodesics import TieBreak, geodesic_indices


@dataclass(frozen=True, eq=False)
class BoundaryMetricApprox:
    """Level-N approximation of the visual metric on the boundary of the tile graph."""
    dist: np.ndarray
    doubled_products: np.ndarray
    tiles: np.ndarray
    lam: float
    depth: int
    tie_break: TieBreak

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def separated(self) -> np.ndarray:
        return self.doubled_products < 2 * self.depth

    def representatives(self) -> np.ndarray:
        """One point per distinct level-N tile; distinct representatives are always separated."""
        _, first = np.unique(self.tiles, return_index=True)
        return np.sort(first)

    def as_space(self) -> FiniteMetricSpace:
        return FiniteMetricSpace(self.dist)


def _cross_diameters(space: FiniteMetricSpace, cover: CoverSequence) -> np.ndarray:
    """sup d(a, b) over a in X and b in Y for every pair of level-N tiles."""
    geometry = cover.geometry(cover.depth)
    flat, starts = geometry.flat_members
    rows = np.maximum.reduceat(space.dist[flat], starts, axis=0)
    return np.maximum.reduceat(rows[:, flat], starts, axis=1)


def boundary_metric(cover: CoverSequence,
                    graph: TileGraph,
                    lam: float | None = None,
                    tie_break: TieBreak = TieBreak.LOWEST) -> BoundaryMetricApprox:
    lam = lam if lam is not None else cover.visual_parameter
    if lam is None:
        raise MissingLambda('boundary metric needs a visual parameter')
    if lam <= 1:
        raise ValueError(f'visual parameter must exceed 1, got {lam}')

    tiles = geodesic_indices(cover, tie_break)[:, cover.depth]
    vertices = graph.offsets[cover.depth] + tiles
    doubled = graph.doubled_products[np.ix_(vertices, vertices)]
    dist = np.where(doubled >= 2 * cover.depth, 0.0, lam ** (-doubled / 2))
    for array in (dist, doubled, tiles):
        array.setflags(write=False)
    return BoundaryMetricApprox(dist, doubled, tiles, float(lam), cover.depth, tie_break)


def diameter_comparability(cover: CoverSequence, boundary: BoundaryMetricApprox) -> tuple[float, tuple[int, int] | None]:
    """
    Spread of diam(X u Y) * lam^(X.Y) over separated pairs, as sqrt(max/min), with diam(X u Y)
    taken as the largest cross distance between the two level-N tiles.
    """
    cross = _cross_diameters(cover.space, cover)[np.ix_(boundary.tiles, boundary.tiles)]
    usable = boundary.separated() & (cross > 0)
    if not usable.any():
        return 1.0, None
    ratio = cross * boundary.lam ** (boundary.doubled_products / 2)
    high = np.where(usable, ratio, -np.inf)
    low = np.where(usable, ratio, np.inf)
    top = np.unravel_index(int(np.argmax(high)), high.shape)
    constant = float(np.sqrt(high[top] / low.min()))
    logging.debug(f'diameter comparability {constant:.4g}')
    return constant, (int(top[0]), int(top[1]))


def tie_break_sensitivity(cover: CoverSequence, graph: TileGraph, lam: float | None = None) -> tuple[float, float]:
    """
    Largest change of a boundary product when ties switch from lowest to highest index, and
    the smallest margin (X^n . Y^n) - n over the two geodesics of a point.
    """
    lowest = boundary_metric(cover, graph, lam, TieBreak.LOWEST)
    highest = boundary_metric(cover, graph, lam, TieBreak.HIGHEST)
    change = float(np.abs(lowest.doubled_products - highest.doubled_products).max()) / 2

    first = geodesic_indices(cover, TieBreak.LOWEST)
    second = geodesic_indices(cover, TieBreak.HIGHEST)
    margin = 0.0
    for n in range(cover.depth + 1):
        level = graph.doubled_products[graph.offsets[n] + first[:, n], graph.offsets[n] + second[:, n]]
        margin = min(margin, float(level.min()) / 2 - n)
    return change, margin
