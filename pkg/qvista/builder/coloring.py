from dataclasses import dataclass, replace

import numpy as np

from qvista.metric import FiniteMetricSpace, Net, greedy_separated

COLOR_SEPARATION = 10.0


@dataclass(frozen=True)
class ColoredNet:
    net: Net
    colors: tuple[int, ...]
    radii: tuple[float, ...] | None = None
    closed: bool = False

    @property
    def color_count(self) -> int:
        return max(self.colors, default=0)

    @property
    def separation(self) -> float:
        return 1.0 / (2 * max(self.color_count, 1))

    def processing_order(self) -> list[int]:
        """Positions in net.members sorted by color, then by point index."""
        return sorted(range(len(self.colors)), key=lambda i: (self.colors[i], self.net.members[i]))

    def balls(self, space: FiniteMetricSpace) -> list[np.ndarray]:
        if self.radii is None:
            raise ValueError('radii have not been adjusted')
        return [ball_members(space, x, r * self.net.delta, self.closed)
                for x, r in zip(self.net.members, self.radii)]


def ball_members(space: FiniteMetricSpace, center: int, radius: float, closed: bool = False) -> np.ndarray:
    row = space.dist[center]
    return np.flatnonzero(row <= radius if closed else row < radius)


def color_separated_set(space: FiniteMetricSpace, net: Net) -> ColoredNet:
    remaining = np.asarray(net.members, dtype=int)
    position = {member: i for i, member in enumerate(net.members)}
    colors = [0] * len(net.members)
    color = 0
    while remaining.size:
        color += 1
        block = space.dist[np.ix_(remaining, remaining)]
        chosen = greedy_separated(block, COLOR_SEPARATION * net.delta)
        for member in remaining[chosen]:
            colors[position[int(member)]] = color
        remaining = np.delete(remaining, chosen)
    return ColoredNet(net, tuple(colors))


def widest_gap_midpoint(critical: list[float]) -> float:
    values = sorted(it for it in critical if 1.0 <= it < 2.0)
    bounds = [1.0, *values, 2.0]
    gaps = np.diff(bounds)
    k = int(np.argmax(gaps))
    return 0.5 * (bounds[k] + bounds[k + 1])


def adjust_radii(space: FiniteMetricSpace, colored: ColoredNet, closed: bool = False) -> ColoredNet:
    delta = colored.net.delta
    members = colored.net.members
    radii = [1.0] * len(members)
    placed: list[tuple[int, np.ndarray]] = []
    for i in colored.processing_order():
        x = members[i]
        if colored.colors[i] > 1:
            earlier = [ball for color, ball in placed if color < colored.colors[i]]
            critical = [float(space.dist[x, ball].min()) / delta for ball in earlier]
            radii[i] = widest_gap_midpoint(critical)
        placed.append((colored.colors[i], ball_members(space, x, radii[i] * delta, closed)))
    return replace(colored, radii=tuple(radii), closed=closed)


def dichotomy_violation(space: FiniteMetricSpace, colored: ColoredNet) -> tuple[int, int, float] | None:
    """First pair of balls that neither meet nor keep distance separation*delta, if any."""
    balls = colored.balls(space)
    bound = colored.separation * colored.net.delta
    masks = np.zeros((len(balls), space.n), dtype=bool)
    for row, ball in enumerate(balls):
        masks[row, ball] = True
    meets = (masks.astype(np.float32) @ masks.T.astype(np.float32)) > 0
    for i in range(len(balls)):
        nearest = space.dist[balls[i]].min(axis=0)
        for j in range(i + 1, len(balls)):
            if meets[i, j]:
                continue
            gap = float(nearest[balls[j]].min())
            if gap < bound:
                return colored.net.members[i], colored.net.members[j], gap
    return None
