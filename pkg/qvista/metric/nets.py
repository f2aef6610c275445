from dataclasses import dataclass

import numpy as np

from .space import FiniteMetricSpace


@dataclass(frozen=True)
class Net:
    delta: float
    members: tuple[int, ...]
    maximal: bool = True

    def __len__(self) -> int:
        return len(self.members)

    def is_separated(self, space: FiniteMetricSpace) -> bool:
        block = space.dist[np.ix_(self.members, self.members)]
        return bool(np.all(block[~np.eye(len(self.members), dtype=bool)] >= self.delta))

    def is_maximal(self, space: FiniteMetricSpace) -> bool:
        return bool(np.all(space.dist[list(self.members)].min(axis=0) < self.delta))


def greedy_separated(dist: np.ndarray, delta: float) -> np.ndarray:
    """Positions of a maximal delta-separated subset, picked in ascending order."""
    count = dist.shape[0]
    covered = np.zeros(count, dtype=bool)
    chosen = []
    for i in range(count):
        if not covered[i]:
            chosen.append(i)
            covered |= dist[i] < delta
    return np.asarray(chosen, dtype=int)


def maximal_separated_net(space: FiniteMetricSpace, delta: float) -> Net:
    if delta <= 0:
        raise ValueError(f'net separation must be positive, got {delta}')
    members = greedy_separated(space.dist, delta)
    return Net(float(delta), tuple(int(it) for it in members), True)
