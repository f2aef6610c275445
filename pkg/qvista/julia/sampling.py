import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import distance

from qvista.metric import FiniteMetricSpace, spherical_distances, spherical_space, to_sphere
from .errors import RootFindFailure, SeedNotRepelling
from .rational_map import RationalMap


@dataclass(frozen=True, eq=False)
class JuliaSample:
    points: np.ndarray
    depth: int
    seed: int
    seed_point: complex

    @property
    def n(self) -> int:
        return self.points.size

    @cached_property
    def vectors(self) -> np.ndarray:
        return to_sphere(self.points)

    @cached_property
    def space(self) -> FiniteMetricSpace:
        return spherical_space(self.points)

    @cached_property
    def mesh(self) -> float:
        """Largest spherical distance from a sample point to its nearest neighbour."""
        if self.n < 2:
            return 0.0
        dist = self.space.dist + np.diag(np.full(self.n, np.inf))
        return float(dist.min(axis=1).max())


def repelling_seed(g: RationalMap, seed_point: complex | None = None) -> complex:
    """The given fixed point if it repels, otherwise the finite fixed point with the largest multiplier."""
    fixed = g.fixed_points()
    multipliers = np.abs(g.derivative(fixed)) if fixed.size else np.empty(0)
    if seed_point is not None:
        multiplier = float(np.abs(g.derivative(seed_point)))
        if abs(complex(g(seed_point)) - seed_point) > 1e-9 * max(1.0, abs(seed_point)) or multiplier <= 1:
            raise SeedNotRepelling(seed_point, multiplier)
        return complex(seed_point)
    if not fixed.size or multipliers.max() <= 1:
        raise SeedNotRepelling(complex(fixed[0]) if fixed.size else complex(np.inf, 0),
                               float(multipliers.max()) if fixed.size else 0.0)
    return complex(fixed[int(np.argmax(multipliers))])


def farthest_point_subset(vectors: np.ndarray, count: int, first: int = 0) -> np.ndarray:
    """Greedy farthest-point order on the sphere, starting at ``first``; returns ``count`` sorted positions."""
    chosen = [first]
    nearest = spherical_distances(vectors, vectors[first:first + 1])[:, 0]
    for _ in range(count - 1):
        following = int(np.argmax(nearest))
        chosen.append(following)
        nearest = np.minimum(nearest, spherical_distances(vectors, vectors[following:following + 1])[:, 0])
    return np.sort(np.asarray(chosen))


def _distinct(points: np.ndarray, tolerance: float) -> np.ndarray:
    vectors = to_sphere(points)
    keys = np.round(vectors / max(tolerance, 1e-15)).astype(np.int64)
    _, first = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(first)]


def julia_sample(g: RationalMap,
                 depth: int,
                 target: int = 1024,
                 seed: int = 0,
                 seed_point: complex | None = None,
                 tolerance: float = 1e-7) -> JuliaSample:
    """
    Inverse iteration from a repelling fixed point: each generation replaces the sample by all of its
    preimages, thinned back to ``target`` points by farthest-point selection.
    """
    if depth < 0:
        raise ValueError(f'depth must be non-negative, got {depth}')
    start = repelling_seed(g, seed_point)
    rng = np.random.default_rng(seed)
    points = np.array([start])
    for generation in range(depth):
        preimages = np.concatenate([g.preimages(w) for w in points])
        preimages = preimages[np.isfinite(preimages)]
        if not preimages.size:
            raise RootFindFailure(f'generation {generation + 1} has no finite preimages')
        points = _distinct(preimages, tolerance)
        if points.size > target:
            points = points[farthest_point_subset(to_sphere(points), target, int(rng.integers(points.size)))]
        logging.debug(f'inverse iteration generation {generation + 1}: {points.size} points')

    sample = JuliaSample(points, depth, seed, start)
    logging.info(f'Julia sample of {str(g)!r}: {sample.n} points, mesh {sample.mesh:.3g}')
    return sample


def sample_map(g: RationalMap, sample: JuliaSample) -> tuple[np.ndarray, float]:
    """Nearest sample point to g(p) for every sample point p, and the largest projection error."""
    images = to_sphere(g(sample.points))
    nearest = distance.cdist(images, sample.vectors).argmin(axis=1)
    chosen = sample.vectors[nearest]
    errors = np.arctan2(np.linalg.norm(np.cross(images, chosen), axis=1), np.sum(images * chosen, axis=1))
    return nearest, float(errors.max()) if errors.size else 0.0


def invariance_defect(g: RationalMap, sample: JuliaSample) -> float:
    """Ratio of the largest projection error of g on the sample to twice its mesh."""
    _, error = sample_map(g, sample)
    if sample.mesh == 0:
        return 0.0 if error == 0 else np.inf
    return error / (2 * sample.mesh)
