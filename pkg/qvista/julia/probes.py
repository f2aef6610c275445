import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as poly
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from qvista.metric import spherical_distances, to_sphere
from .errors import RootFindFailure
from .rational_map import RationalMap, merge_roots

MAX_FIBER = 4096
NEWTON_ITERATIONS = 8


@dataclass(frozen=True)
class DegreeProbe:
    degrees: tuple[int, ...]
    iterates: int
    critical_values_inside: int
    fiber_size: int

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def components(self) -> int:
        return len(self.degrees)


@dataclass(frozen=True)
class DistortionConfig:
    center: complex
    base: complex
    iterates: int
    radius: float


@dataclass(frozen=True)
class DistortionProbe:
    image_ratios: np.ndarray
    ratios: np.ndarray
    envelope: tuple[tuple[float, float], ...]
    exponent: float
    monotone: bool


def _disk(center: complex, radius: float) -> tuple[complex, float] | None:
    """Euclidean disk equal to a spherical ball, or None when the ball contains infinity."""
    polar = 2 * math.atan(abs(center))
    if polar + radius >= math.pi:
        return None
    direction = center / abs(center) if center != 0 else 1.0
    near, far = math.tan((polar - radius) / 2), math.tan((polar + radius) / 2)
    return direction * (near + far) / 2, (far - near) / 2


def iterated_fiber(g: RationalMap, value: complex, iterates: int) -> tuple[np.ndarray, np.ndarray]:
    """All points of g^-iterates(value) in parent-major order, with the parent of each at the previous stage."""
    fibers, parents = [np.array([value])], [np.zeros(1, dtype=np.int64)]
    for _ in range(iterates):
        current = np.concatenate([g.preimages(w) for w in fibers[-1]])
        fibers.append(current)
        parents.append(np.repeat(np.arange(fibers[-2].size), g.degree))
    return fibers, parents


def lift(g: RationalMap, start: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Continues each start point along g(z) = targets[s, column] by Newton steps."""
    derivative_top, derivative_bottom = poly.polyder(g.numerator), poly.polyder(g.denominator)
    path = np.empty(targets.shape, dtype=complex)
    z = start.astype(complex)
    path[0] = z
    for s in range(1, targets.shape[0]):
        target = targets[s]
        for _ in range(NEWTON_ITERATIONS):
            value = poly.polyval(z, g.numerator) - target * poly.polyval(z, g.denominator)
            slope = poly.polyval(z, derivative_top) - target * poly.polyval(z, derivative_bottom)
            with np.errstate(divide='ignore', invalid='ignore'):
                z = z - value / slope
        if not np.all(np.isfinite(z)):
            raise RootFindFailure(f'path lifting diverged at step {s}')
        path[s] = z
    return path


def _loop(start: complex, critical: complex, radius: float, steps: int) -> np.ndarray:
    """Out along a segment from ``start`` to a small circle around ``critical``, once around it, and back."""
    offset = start - critical
    landing = critical + radius * offset / abs(offset)
    out = start + (landing - start) * np.linspace(0, 1, steps + 1)
    around = critical + radius * (offset / abs(offset)) * np.exp(2j * np.pi * np.linspace(0, 1, steps + 1))
    return np.concatenate([out, around[1:], out[::-1][1:]])


def _monodromy(g: RationalMap,
               loop: np.ndarray,
               fibers: list[np.ndarray],
               parents: list[np.ndarray],
               tolerance: float) -> np.ndarray:
    """Permutation of the final fiber obtained by lifting the loop through g one stage at a time."""
    paths = loop[:, None]
    for stage in range(1, len(fibers)):
        paths = lift(g, fibers[stage], paths[:, parents[stage]])
    final = fibers[-1]
    ends = paths[-1]
    gaps = np.abs(ends[:, None] - final[None, :])
    permutation = gaps.argmin(axis=1)
    if np.any(gaps[np.arange(ends.size), permutation] > tolerance * np.maximum(1.0, np.abs(final[permutation]))):
        raise RootFindFailure('a lifted loop does not close on the fiber')
    return permutation


def degree_probe(g: RationalMap,
                 center: complex,
                 radius: float,
                 iterates: int,
                 steps: int = 256,
                 seed: int = 0,
                 tolerance: float = 1e-6) -> DegreeProbe:
    """
    Degrees of g^iterates on the components of g^-iterates(B(center, radius)): a component is a
    monodromy orbit of the fiber over a generic value, with loops around the critical values in B.
    """
    if iterates < 1:
        raise ValueError(f'iterates must be positive, got {iterates}')
    fiber_size = g.degree ** iterates
    if fiber_size > MAX_FIBER:
        raise ValueError(f'fiber of {fiber_size} points exceeds {MAX_FIBER}')
    if radius >= math.pi:
        return DegreeProbe((fiber_size,), iterates, len(g.critical_values(iterates)), fiber_size)
    disk = _disk(complex(center), radius)
    if disk is None:
        raise ValueError('degree probe balls must not contain infinity')
    disk_center, disk_radius = disk

    values = g.critical_values(iterates)
    values = values[np.isfinite(values)]
    inside = values[np.abs(values - disk_center) < disk_radius]

    rng = np.random.default_rng(seed)
    for _ in range(64):
        test = disk_center + 0.6 * disk_radius * math.sqrt(rng.uniform(0.1, 1)) * np.exp(2j * np.pi * rng.uniform())
        if not inside.size or np.abs(inside - test).min() > 0.05 * disk_radius:
            break
    fibers, parents = iterated_fiber(g, test, iterates)
    if not np.all(np.isfinite(fibers[-1])):
        raise RootFindFailure('fiber of the test value reaches infinity')

    rows, cols = [np.arange(fiber_size)], [np.arange(fiber_size)]
    for critical in inside:
        others = np.abs(inside - critical)
        others = others[others > 0]
        small = min(0.5 * (disk_radius - abs(critical - disk_center)),
                    0.5 * abs(test - critical),
                    0.5 * others.min() if others.size else np.inf)
        permutation = _monodromy(g, _loop(test, critical, small, steps), fibers, parents, tolerance)
        rows.append(np.arange(fiber_size))
        cols.append(permutation)

    rows, cols = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(fiber_size, fiber_size))
    count, labels = connected_components(graph, directed=False)
    degrees = tuple(sorted(np.bincount(labels, minlength=count).tolist(), reverse=True))
    logging.info(f'degree probe at {center:.4g} (r={radius:.3g}, n={iterates}): max degree {max(degrees)} '
                 f'over {count} components')
    return DegreeProbe(degrees, iterates, int(inside.size), fiber_size)


def _spherical_diameter(points: np.ndarray) -> float:
    if points.size < 2:
        return 0.0
    vectors = to_sphere(points)
    return float(spherical_distances(vectors, vectors).max())


def _local_preimages(g: RationalMap, config: DistortionConfig, scales: np.ndarray, count: int,
                     tolerance: float) -> tuple[list[np.ndarray], list[np.ndarray]]:
    fibers, _ = iterated_fiber(g, config.center, config.iterates)
    fiber = merge_roots(fibers[-1][np.isfinite(fibers[-1])], tolerance)
    base = fiber[int(np.argmin(np.abs(fiber - config.base)))]
    others = np.abs(fiber - base)
    reach = 0.5 * others[others > 0].min() if np.any(others > 0) else np.inf

    images, sets = [], []
    angles = np.exp(2j * np.pi * np.arange(count) / count)
    for scale in scales:
        circle = config.center + scale * config.radius * angles
        lifted = np.concatenate([iterated_fiber(g, w, config.iterates)[0][-1] for w in circle])
        lifted = lifted[np.isfinite(lifted) & (np.abs(lifted - base) < reach)]
        images.append(circle)
        sets.append(lifted)
    return images, sets


def distortion_probe(g: RationalMap,
                     configs: Sequence[DistortionConfig],
                     scales: np.ndarray | None = None,
                     circle_points: int = 64,
                     bins: int = 8,
                     tolerance: float = 1e-6) -> DistortionProbe:
    """
    Tabulates diam(A)/diam(A') against diam(g^n A)/diam(g^n A') where A are the pieces of
    g^-n(circles) around a base point and A' is the piece for the largest circle.
    """
    scales = np.geomspace(1e-3, 1.0, 16) if scales is None else np.sort(np.asarray(scales, dtype=float))
    image_ratios, ratios = [0.0], [0.0]
    for config in configs:
        images, sets = _local_preimages(g, config, scales, circle_points, tolerance)
        reference, reference_image = _spherical_diameter(sets[-1]), _spherical_diameter(images[-1])
        if reference == 0 or reference_image == 0:
            logging.warning(f'distortion configuration at {config.center:.4g} has a degenerate reference set')
            continue
        for image, lifted in zip(images, sets):
            if lifted.size:
                image_ratios.append(_spherical_diameter(image) / reference_image)
                ratios.append(_spherical_diameter(lifted) / reference)

    image_ratios, ratios = np.asarray(image_ratios), np.asarray(ratios)
    positive = (image_ratios > 0) & (ratios > 0)
    if positive.sum() < 2:
        return DistortionProbe(image_ratios, ratios, (), math.nan, True)
    exponent = float(np.polyfit(np.log(image_ratios[positive]), np.log(ratios[positive]), 1)[0])

    edges = np.geomspace(image_ratios[positive].min(), image_ratios[positive].max() * (1 + 1e-12), bins + 1)
    envelope = []
    for low, high in zip(edges[:-1], edges[1:]):
        chosen = positive & (image_ratios >= low) & (image_ratios < high)
        if chosen.any():
            envelope.append((float(np.sqrt(low * high)), float(ratios[chosen].max())))
    peaks = np.maximum.accumulate([it[1] for it in envelope])
    monotone = bool(np.all([it[1] >= 0.9 * peak for it, peak in zip(envelope, peaks)]))
    logging.info(f'distortion envelope exponent {exponent:.3f} over {int(positive.sum())} configurations')
    return DistortionProbe(image_ratios, ratios, tuple(envelope), exponent, monotone)
