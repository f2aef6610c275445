from dataclasses import dataclass
from typing import Any

import numpy as np

from qvista.covers import CoverSequence


@dataclass(frozen=True, eq=False)
class ProximityTable:
    """
    Proximity levels m_w(x, y) of a cover truncated at depth N.

    Pairs still proximate at level N carry the sentinel N+1, read as "beyond certification".
    """
    m: np.ndarray
    width: int
    depth: int

    @property
    def sentinel(self) -> int:
        return self.depth + 1

    @property
    def n(self) -> int:
        return self.m.shape[0]

    def is_sentinel(self) -> np.ndarray:
        return self.m >= self.sentinel

    def unresolved_pairs(self) -> np.ndarray:
        return self.is_sentinel() & ~np.eye(self.n, dtype=bool)

    def levels(self) -> np.ndarray:
        """Numeric levels: an off-diagonal sentinel counts as N, the diagonal stays N+1."""
        numeric = np.minimum(self.m, self.depth)
        np.fill_diagonal(numeric, self.sentinel)
        return numeric

    def to_dict(self) -> dict[str, Any]:
        return {'width': self.width, 'depth': self.depth, 'sentinel': self.sentinel, 'm': self.m.tolist()}


def _level_pairs(cover: CoverSequence, n: int, tile_relation: np.ndarray) -> np.ndarray:
    membership = cover.geometry(n).membership.astype(np.float32)
    return (membership.T @ (tile_relation.astype(np.float32) @ membership)) > 0


def compute_proximity(cover: CoverSequence, width: int | None = None) -> ProximityTable:
    w = cover.width if width is None else width
    m = np.zeros((cover.space.n, cover.space.n), dtype=np.int32)
    for n in range(1, cover.depth + 1):
        m[_level_pairs(cover, n, cover.geometry(n).meets(w))] = n
    m[m == cover.depth] = cover.depth + 1
    m.setflags(write=False)
    return ProximityTable(m, w, cover.depth)


def infimum_proximity(cover: CoverSequence, width: int | None = None) -> ProximityTable:
    """First level with tiles X containing x and Y containing y whose U_w neighbourhoods are disjoint."""
    w = cover.width if width is None else width
    m = np.full((cover.space.n, cover.space.n), cover.depth + 1, dtype=np.int32)
    for n in range(cover.depth, -1, -1):
        m[_level_pairs(cover, n, cover.geometry(n).separated(w))] = n
    m.setflags(write=False)
    return ProximityTable(m, w, cover.depth)


def infimum_gap_violation(infimum: ProximityTable, table: ProximityTable) -> tuple[int, int] | None:
    resolved = ~table.is_sentinel()
    bad = np.argwhere(resolved & (infimum.m > table.m + 1))
    if bad.size:
        return int(bad[0][0]), int(bad[0][1])
    return None
