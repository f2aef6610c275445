import itertools
import math
from enum import StrEnum
from typing import Any, Callable

import numpy as np
from scipy.sparse.csgraph import floyd_warshall

from qvista.covers import CoverSequence
from qvista.metric import FiniteMetricSpace
from qvista.util.enum import EnhancedEnum
from .errors import UnknownFixture


class FixtureName(EnhancedEnum, StrEnum):
    CANTOR = 'cantor'
    INTERVAL_DYADIC = 'interval_dyadic'
    TREE_EXAMPLE_3_7 = 'tree_example_3_7'
    BRANCHING_TREE = 'branching_tree'
    DYADIC_INTERLEAVED = 'dyadic_interleaved'
    SIERPINSKI_GASKET = 'sierpinski_gasket'
    CIRCLE_ARCS = 'circle_arcs'


def _line_space(numerators: np.ndarray, denominator: int) -> FiniteMetricSpace:
    dist = np.abs(numerators[:, None] - numerators[None, :]) / denominator
    return FiniteMetricSpace(dist, (numerators / denominator)[:, None])


def _interval_members(points: np.ndarray, low: int, high: int) -> np.ndarray:
    return np.flatnonzero((points >= low) & (points <= high))


def cantor(depth: int, resolution: int | None = None, width: int = 0) -> tuple[FiniteMetricSpace, CoverSequence]:
    """Both endpoints of the 2^s ternary intervals of level s; level-n tiles are the level-n intervals."""
    s = depth if resolution is None else resolution
    if s < depth - 1:
        raise ValueError(f'cantor resolution {s} is too coarse for depth {depth}')

    def left_ends(level: int) -> list[int]:
        return [sum(2 * c * 3 ** (s - i) for i, c in enumerate(digits, start=1))
                for digits in itertools.product((0, 1), repeat=level)]

    lefts = np.asarray(left_ends(s), dtype=np.int64)
    points = np.sort(np.concatenate([lefts, lefts + 1]))
    space = _line_space(points, 3 ** s)

    levels = [[np.arange(points.size)]]
    for n in range(1, depth + 1):
        # a level-n interval spans 3^(s-n) units; below level s it is a third of a unit wide
        span = 3 ** (s - n) if n <= s else 0
        family = []
        for left in sorted(left_ends(min(n, s))):
            if n <= s:
                family.append(_interval_members(points, left, left + span))
            else:
                family.append(_interval_members(points, left, left))
                family.append(_interval_members(points, left + 1, left + 1))
        levels.append(family)
    return space, CoverSequence(space, levels, width, 3.0)


def _dyadic_family(points: np.ndarray, resolution: int, level: int) -> list[np.ndarray]:
    span = 2 ** (resolution - level)
    return [_interval_members(points, k * span, (k + 1) * span) for k in range(2 ** level)]


def interval_dyadic(depth: int, resolution: int | None = None, width: int = 0) -> tuple[FiniteMetricSpace, CoverSequence]:
    r = depth + 2 if resolution is None else resolution
    if r < depth:
        raise ValueError(f'dyadic resolution {r} is too coarse for depth {depth}')
    points = np.arange(2 ** r + 1, dtype=np.int64)
    space = _line_space(points, 2 ** r)
    levels = [_dyadic_family(points, r, n) for n in range(depth + 1)]
    return space, CoverSequence(space, levels, width, 2.0)


def interleaved_exponent(n: int) -> int:
    return n // 2 if n % 2 == 0 else n - 1


def dyadic_interleaved(depth: int, resolution: int | None = None, width: int = 0) -> tuple[FiniteMetricSpace, CoverSequence]:
    """Even levels 2k use the dyadic intervals of length 2^-k, odd levels 2k+1 those of length 2^-2k."""
    needed = max(interleaved_exponent(n) for n in range(depth + 1))
    r = needed if resolution is None else resolution
    if r < needed:
        raise ValueError(f'interleaved cover of depth {depth} needs resolution {needed}')
    points = np.arange(2 ** r + 1, dtype=np.int64)
    space = _line_space(points, 2 ** r)
    levels = [_dyadic_family(points, r, interleaved_exponent(n)) for n in range(depth + 1)]
    return space, CoverSequence(space, levels, width, None)


def branching_tree(depth: int, width: int = 0) -> tuple[FiniteMetricSpace, CoverSequence]:
    """
    Sequences x_0..x_N with x_i in {0..i} under d(x, y) = 2^-k, k the first index where
    they differ. The level-n tile fixes x_0..x_{n-1}.
    """
    sequences = np.array(list(itertools.product(*(range(i + 1) for i in range(depth + 1)))), dtype=np.int64)
    differs = sequences[:, None, :] != sequences[None, :, :]
    first = np.where(differs.any(axis=2), differs.argmax(axis=2), -1)
    dist = np.where(first >= 0, 2.0 ** -first.astype(float), 0.0)
    space = FiniteMetricSpace(dist, sequences.astype(float))

    levels = [[np.arange(len(sequences))]]
    for n in range(1, depth + 1):
        _, labels = np.unique(sequences[:, :n], axis=0, return_inverse=True)
        labels = labels.reshape(-1)
        levels.append([np.flatnonzero(labels == label) for label in range(labels.max() + 1)])
    return space, CoverSequence(space, levels, width, 2.0)


def sierpinski_gasket(depth: int, resolution: int | None = None, width: int = 0) -> tuple[FiniteMetricSpace, CoverSequence]:
    """Vertices of the level-r subtriangles; level-n tiles are the vertices inside each level-n subtriangle."""
    r = depth + 1 if resolution is None else resolution
    if r < depth:
        raise ValueError(f'gasket resolution {r} is too coarse for depth {depth}')

    corners = [(0, 0)]
    for level in range(r):
        half = 2 ** (r - level - 1)
        corners = [(a + da, b + db) for a, b in corners for da, db in ((0, 0), (half, 0), (0, half))]
    vertices = sorted({vertex for a, b in corners for vertex in ((a, b), (a + 1, b), (a, b + 1))})
    lattice = np.asarray(vertices, dtype=np.int64)
    scale = 2 ** r
    coords = np.stack([(lattice[:, 0] + lattice[:, 1] / 2) / scale, lattice[:, 1] * math.sqrt(3) / 2 / scale], axis=1)
    space = FiniteMetricSpace.from_coords(coords)

    levels = [[np.arange(len(lattice))]]
    triangles = [(0, 0)]
    for n in range(1, depth + 1):
        half = 2 ** (r - n)
        triangles = [(a + da, b + db) for a, b in triangles for da, db in ((0, 0), (half, 0), (0, half))]
        family = []
        for a, b in triangles:
            p, q = lattice[:, 0] - a, lattice[:, 1] - b
            family.append(np.flatnonzero((p >= 0) & (q >= 0) & (p + q <= half)))
        levels.append(family)
    return space, CoverSequence(space, levels, width, 2.0)


def circle_arcs(depth: int, resolution: int | None = None, width: int = 0) -> tuple[FiniteMetricSpace, CoverSequence]:
    """2^r equally spaced points of the unit circle with the closed dyadic arcs as tiles."""
    r = max(depth, 10) if resolution is None else resolution
    if r < depth:
        raise ValueError(f'circle resolution {r} is too coarse for depth {depth}')
    count = 2 ** r
    steps = np.arange(count)
    gap = np.abs(steps[:, None] - steps[None, :])
    dist = 2 * math.pi * np.minimum(gap, count - gap) / count
    coords = np.exp(2j * math.pi * steps / count)
    space = FiniteMetricSpace(dist, np.stack([coords.real, coords.imag], axis=1))

    levels = [[steps]]
    for n in range(1, depth + 1):
        span = 2 ** (r - n)
        levels.append([np.arange(k * span, (k + 1) * span + 1) % count for k in range(2 ** n)])
    return space, CoverSequence(space, levels, width, 2.0)


def angle_doubling_map(resolution: int) -> np.ndarray:
    count = 2 ** resolution
    return (2 * np.arange(count)) % count


_FIXTURES: dict[FixtureName, Callable[..., tuple[FiniteMetricSpace, CoverSequence]]] = {
    FixtureName.CANTOR: cantor,
    FixtureName.INTERVAL_DYADIC: interval_dyadic,
    FixtureName.TREE_EXAMPLE_3_7: branching_tree,
    FixtureName.BRANCHING_TREE: branching_tree,
    FixtureName.DYADIC_INTERLEAVED: dyadic_interleaved,
    FixtureName.SIERPINSKI_GASKET: sierpinski_gasket,
    FixtureName.CIRCLE_ARCS: circle_arcs,
}


def fixture(name: str | FixtureName, depth: int, **params: Any) -> tuple[FiniteMetricSpace, CoverSequence]:
    try:
        key = name if isinstance(name, FixtureName) else FixtureName.parse(name)
    except ValueError as e:
        raise UnknownFixture(str(e)) from e
    params = {key_: value for key_, value in params.items() if value is not None}
    return _FIXTURES[key](depth, **params)


def shared_level(cover: CoverSequence, point: int) -> np.ndarray:
    """For every point y, the deepest level at which y shares a tile with ``point``."""
    level = np.zeros(cover.space.n, dtype=int)
    for n in range(1, cover.depth + 1):
        membership = cover.geometry(n).membership
        together = membership[membership[:, point]].any(axis=0)
        level[together] = n
    return level


def row_scaled_perturbation(cover: CoverSequence, row: int = 0, base: float = 1e3) -> FiniteMetricSpace:
    """
    Scales the distances from ``row`` by base^-(N - level), level being how deep the pair stays
    together in the cover, then closes the result under shortest paths.
    """
    factors = base ** -(cover.depth - shared_level(cover, row)).astype(float)
    scaled = np.array(cover.space.dist, copy=True)
    scaled[row, :] *= factors
    scaled[:, row] *= factors
    scaled[row, row] = 0.0
    closed = floyd_warshall(scaled, directed=False)
    return cover.space.with_dist(closed)
