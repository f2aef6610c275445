import logging
from dataclasses import dataclass

import numpy as np

from .nets import greedy_separated
from .space import FiniteMetricSpace

MAX_PROBE_RADII = 128


@dataclass(frozen=True)
class DoublingProbe:
    count: int
    center: int
    radius: float
    balls_scanned: int


@dataclass(frozen=True)
class UniformPerfectness:
    constant: float
    r_min: float
    r_max: float
    ratio: float
    radii: int
    worst_center: int
    worst_radius: float


def probe_radii(space: FiniteMetricSpace) -> np.ndarray:
    """Distinct positive distances of the space, thinned evenly when there are many."""
    radii = np.unique(space.dist[space.dist > 0])
    if radii.size > MAX_PROBE_RADII:
        radii = radii[np.linspace(0, radii.size - 1, MAX_PROBE_RADII).round().astype(int)]
    return radii


def doubling_probe(space: FiniteMetricSpace,
                   lam: float,
                   sample_balls: int | None = None,
                   seed: int = 0) -> DoublingProbe:
    """
    Largest greedy lam*r-separated subset of a ball B(x, r) over scanned balls.

    Balls are every (center, radius) pair with radius from the distinct distances; with
    ``sample_balls`` a seeded prefix of a fixed permutation is scanned, so the result
    never decreases as the sample grows.
    """
    if not 0 < lam < 1:
        raise ValueError(f'lambda must lie in (0, 1), got {lam}')
    radii = probe_radii(space)
    if space.n <= 1 or radii.size == 0:
        return DoublingProbe(space.n, 0, 0.0, 0)

    candidates = np.array([(x, k) for x in space.points for k in range(radii.size)], dtype=int)
    if sample_balls is not None and sample_balls < len(candidates):
        order = np.random.default_rng(seed).permutation(len(candidates))
        candidates = candidates[order[:sample_balls]]

    best = DoublingProbe(1, 0, 0.0, len(candidates))
    for x, k in candidates:
        radius = radii[k]
        ball = np.flatnonzero(space.dist[x] < radius)
        if ball.size <= best.count:
            continue
        count = greedy_separated(space.dist[np.ix_(ball, ball)], lam * radius).size
        if count > best.count:
            best = DoublingProbe(int(count), int(x), float(radius), len(candidates))
    logging.debug(f'doubling probe lambda={lam}: {best.count} points in B({best.center}, {best.radius:.3g})')
    return best


def uniform_perfectness_probe(space: FiniteMetricSpace,
                              ratio: float = 1.1,
                              resolution_factor: float = 10.0) -> UniformPerfectness:
    """
    Best lambda keeping every annulus {lambda*r < d(x, y) <= r} non-empty over a geometric
    radius grid from the sample resolution up to the diameter.
    """
    if space.n < 2:
        raise ValueError('uniform perfectness needs at least two points')
    if ratio <= 1:
        raise ValueError(f'radius ratio must exceed 1, got {ratio}')

    d = space.dist
    nearest = np.where(np.eye(space.n, dtype=bool), np.inf, d).min(axis=1)
    r_max = space.diameter
    r_min = min(resolution_factor * float(nearest.max()), r_max)
    steps = int(np.floor(np.log(r_max / r_min) / np.log(ratio))) + 1
    radii = r_max / ratio ** np.arange(steps)

    # a center is only probed up to its eccentricity; beyond it the ball is the whole space
    eccentricity = d.max(axis=1)
    constant, worst_center, worst_radius = 1.0, 0, r_max
    for radius in radii:
        reach = np.where(d <= radius, d, 0.0).max(axis=1) / radius
        reach[eccentricity < radius] = np.inf
        x = int(np.argmin(reach))
        if reach[x] < constant:
            constant, worst_center, worst_radius = float(reach[x]), x, float(radius)
    return UniformPerfectness(constant, r_min, r_max, ratio, len(radii), worst_center, worst_radius)
