import logging
import math
from dataclasses import dataclass

import numpy as np

from qvista.metric import maximal_separated_net
from .errors import EmptyLevel, ResolutionInsufficient
from .grid import SphereGrid
from .rational_map import RationalMap
from .sampling import JuliaSample


@dataclass(frozen=True, eq=False)
class AmbientRegion:
    level: int
    index: int
    cells: np.ndarray
    parent: int | None
    root: int
    degree: int

    def __len__(self) -> int:
        return self.cells.size


@dataclass(frozen=True, eq=False)
class PullbackCover:
    grid: SphereGrid
    levels: tuple[tuple[AmbientRegion, ...], ...]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def regions(self, n: int) -> tuple[AmbientRegion, ...]:
        """Regions of level n, 1 <= n <= depth."""
        return self.levels[n - 1]


def admissible_cover(sample: JuliaSample, grid: SphereGrid, radius: float) -> tuple[AmbientRegion, ...]:
    """Rasterized spherical balls of the given radius around a maximal net of the sample."""
    if radius <= 0:
        raise ValueError(f'cover radius must be positive, got {radius}')
    centers = (0,) if radius >= math.pi else maximal_separated_net(sample.space, radius).members
    located = grid.locate(sample.points)
    regions = []
    for index, center in enumerate(centers):
        mask = grid.ball(sample.vectors[center], radius)
        mask[located[center]] = True
        regions.append(AmbientRegion(1, index, np.flatnonzero(mask), None, index, 1))
    logging.info(f'admissible cover of radius {radius:.4g}: {len(regions)} regions')
    return tuple(regions)


def _piece_degrees(g: RationalMap,
                   sample: JuliaSample,
                   grid: SphereGrid,
                   located: np.ndarray,
                   parent: AmbientRegion,
                   pieces: list[np.ndarray],
                   level: int) -> np.ndarray:
    """Preimages of one sample point of the parent falling in each piece, with multiplicity."""
    inside = np.flatnonzero(grid.mask(parent.cells)[located])
    roots = g.preimages(sample.points[inside[0]])
    labels = np.full(grid.count, -1, dtype=np.int64)
    for k, piece in enumerate(pieces):
        labels[piece] = k
    hits = labels[grid.locate(roots)]
    degrees = np.bincount(hits[hits >= 0], minlength=len(pieces))
    if pieces and degrees.min() == 0:
        raise ResolutionInsufficient(level, grid.size, 'a pulled-back component holds no preimage of its test value')
    return degrees


def pullback_cover(g: RationalMap,
                   sample: JuliaSample,
                   grid: SphereGrid,
                   first: tuple[AmbientRegion, ...],
                   levels: int) -> PullbackCover:
    """
    Levels 2..levels are the components of g^-1 of the parent regions (dilated by one cell) that
    meet the sample, so g maps every region into its parent up to one cell.
    """
    if levels < 1:
        raise ValueError(f'pull-back needs at least one level, got {levels}')
    image = grid.locate_image(g)
    located = grid.locate(sample.points)
    has_sample = grid.mask(located)

    built = [first]
    for n in range(2, levels + 1):
        children = []
        for parent in built[-1]:
            pulled = grid.dilate(grid.mask(parent.cells))[image]
            pieces = [it for it in grid.components(pulled) if has_sample[it].any()]
            degrees = _piece_degrees(g, sample, grid, located, parent, pieces, n)
            for piece, degree in zip(pieces, degrees):
                children.append(AmbientRegion(n, len(children), piece, parent.index, parent.root, int(degree)))
        if not children:
            raise EmptyLevel(n)
        logging.info(f'pull-back level {n}: {len(children)} regions')
        built.append(tuple(children))
    return PullbackCover(grid, tuple(built))
