from dataclasses import dataclass

import numpy as np

from qvista.covers import CoverSequence, TileId, Verdict
from .graph import TileGraph


@dataclass(frozen=True)
class GraphMapCheck:
    verdict: Verdict
    radius: int
    lower_slack: int
    lower_witness: tuple[TileId, TileId] | None
    upper_slack: int
    upper_witness: tuple[TileId, TileId] | None


def _cluster_indices(graph: TileGraph, index: int, r: int) -> np.ndarray:
    near = np.flatnonzero(graph.distances[index] <= r)
    return np.unique(np.concatenate([graph.cover.tile(graph.vertex(int(it))).members for it in near]))


def cluster(graph: TileGraph, tile_id: TileId, r: int) -> np.ndarray:
    """Union of all tiles within graph distance r of the given one."""
    if r < 0:
        raise ValueError(f'cluster radius must be non-negative, got {r}')
    return _cluster_indices(graph, graph.index(tile_id), r)


def cluster_cover_sequence(graph: TileGraph, r: int, width: int | None = None) -> CoverSequence:
    cover = graph.cover
    levels = [[_cluster_indices(graph, graph.offsets[n] + i, r) for i in range(len(family))]
              for n, family in enumerate(cover.levels)]
    return CoverSequence(cover.space, levels, cover.width if width is None else width, cover.visual_parameter)


def graph_map_check(graph_x: TileGraph, graph_v: TileGraph, r: int) -> GraphMapCheck:
    """
    Checks |X - Y| / (2r+1) <= |V(X) - V(Y)| <= |X - Y| / (2r+1) + 1 over all vertex pairs, with
    the cluster graph's vertices in the same order as the original's.
    """
    if graph_x.size != graph_v.size:
        raise ValueError(f'graphs differ in size: {graph_x.size} vs {graph_v.size}')
    scale = 2 * r + 1
    original = graph_x.distances
    clustered = scale * graph_v.distances

    lower = original - clustered
    upper = clustered - original - scale
    lower_at = np.unravel_index(int(np.argmax(lower)), lower.shape)
    upper_at = np.unravel_index(int(np.argmax(upper)), upper.shape)

    def witness(at) -> tuple[TileId, TileId]:
        return graph_x.vertex(int(at[0])), graph_x.vertex(int(at[1]))

    passed = lower[lower_at] <= 0 and upper[upper_at] <= 0
    return GraphMapCheck(Verdict.PASS if passed else Verdict.FAIL, r,
                         int(lower[lower_at]), witness(lower_at),
                         int(upper[upper_at]), witness(upper_at))
