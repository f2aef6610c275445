import logging
from dataclasses import dataclass

import numpy as np

from qvista.covers import TileId
from qvista.proximity import ProximityTable
from .graph import TileGraph


@dataclass(frozen=True)
class GromovComparison:
    constant: float
    levgr_constant: float
    pairs: int
    witness: tuple[TileId, TileId] | None


def extended_proximity_matrix(graph: TileGraph, table: ProximityTable) -> np.ndarray:
    """m(X, Y) = min m(x, y) over x in X and y in Y, for every pair of vertices."""
    members = [tile.members for tile in graph.cover.tiles()]
    starts = np.cumsum([0] + [len(it) for it in members[:-1]])
    flat = np.concatenate(members)
    rows = np.stack([table.m[it].min(axis=0) for it in members])
    extended = np.minimum.reduceat(rows[:, flat], starts, axis=1)
    extended.setflags(write=False)
    return extended


def extended_proximity(graph: TileGraph, table: ProximityTable, x: TileId, y: TileId) -> int:
    first = graph.cover.tile(x).members
    second = graph.cover.tile(y).members
    return int(table.m[np.ix_(first, second)].min())


def extended_triangle_constant(graph: TileGraph,
                               extended: np.ndarray) -> tuple[float, tuple[TileId, TileId, TileId] | None]:
    """
    Smallest C with m(X, Y) >= min(m(X, Z), m(Z, Y)) - C, with the worst (X, Y, Z) when C > 0.
    Unresolved pairs count as level N.
    """
    values = np.minimum(extended, graph.cover.depth)
    worst, witness = 0, None
    for z in range(values.shape[0]):
        excess = np.minimum(values[:, z, None], values[None, z, :]) - values
        x, y = np.unravel_index(int(np.argmax(excess)), excess.shape)
        if excess[x, y] > worst:
            worst = int(excess[x, y])
            witness = (graph.vertex(int(x)), graph.vertex(int(y)), graph.vertex(z))
    return float(worst), witness


def compare_m_gromov(graph: TileGraph, table: ProximityTable) -> GromovComparison:
    extended = extended_proximity_matrix(graph, table)
    resolved = extended < table.sentinel
    if not resolved.any():
        return GromovComparison(0.0, 0.0, 0, None)

    doubled = graph.doubled_products
    gap = np.where(resolved, np.abs(doubled - 2 * extended), -1)
    x, y = np.unravel_index(int(np.argmax(gap)), gap.shape)
    # |X| + |Y| - 2 m(X, Y) - C <= |X - Y|
    levgr = np.where(resolved, doubled - 2 * extended, 0).max()

    result = GromovComparison(gap[x, y] / 2, float(max(levgr, 0)), int(np.count_nonzero(resolved)),
                              (graph.vertex(int(x)), graph.vertex(int(y))))
    logging.info(f'proximity vs Gromov product: C={result.constant}, levgr C={result.levgr_constant}')
    return result


def hyperbolicity_bound(comparison: GromovComparison, c_cv: float) -> float:
    return 2 * comparison.constant + c_cv
