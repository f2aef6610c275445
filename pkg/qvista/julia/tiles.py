import logging
from dataclasses import dataclass

import numpy as np

from qvista.covers import CoverSequence
from .errors import EmptyLevel
from .pullback import AmbientRegion, PullbackCover
from .sampling import JuliaSample


@dataclass(frozen=True)
class InductionDefects:
    """
    Per level n (index n - 1): sample points outside every region, tile points whose image under
    the sample map leaves the parent region's tile, and regions that miss the sample.
    """
    uncovered: tuple[int, ...]
    parent_misses: tuple[int, ...]
    dropped: tuple[int, ...]

    @staticmethod
    def per_level(counts: tuple[int, ...]) -> dict[str, float]:
        return {str(n): float(it) for n, it in enumerate(counts, start=1)}


def region_members(pullback: PullbackCover, sample: JuliaSample) -> list[list[set[int]]]:
    """Sample points inside each dilated region, level by level, indexed like the regions."""
    grid = pullback.grid
    located = grid.locate(sample.points)
    return [[set(np.flatnonzero(grid.dilate(grid.mask(region.cells))[located]).tolist()) for region in regions]
            for regions in pullback.levels]


def _nearest_region(pullback: PullbackCover,
                    sample: JuliaSample,
                    point: int,
                    regions: tuple[AmbientRegion, ...]) -> int:
    vectors = pullback.grid.vectors
    closeness = [float((vectors[region.cells] @ sample.vectors[point]).max()) for region in regions]
    return int(np.argmax(closeness))


def induce_tiles(pullback: PullbackCover, sample: JuliaSample) -> CoverSequence:
    """
    Level-n tiles are the sample points inside each dilated level-n region; X^0 is the whole sample.
    Points outside every region join the nearest one so each level still covers.
    """
    levels = [[np.arange(sample.n)]]
    for n, (regions, members) in enumerate(zip(pullback.levels, region_members(pullback, sample)), start=1):
        tiles = [set(it) for it in members]
        covered = set().union(*tiles)
        leftovers = [p for p in range(sample.n) if p not in covered]
        for p in leftovers:
            tiles[_nearest_region(pullback, sample, p, regions)].add(p)
        if leftovers:
            logging.debug(f'level {n}: {len(leftovers)} points outside every region')

        kept = [np.asarray(sorted(it)) for it in tiles if it]
        if len(kept) < len(tiles):
            logging.warning(f'level {n}: dropped {len(tiles) - len(kept)} regions missing the sample')
        if not kept:
            raise EmptyLevel(n)
        levels.append(kept)
    return CoverSequence(sample.space, levels, width=1)


def induction_defects(pullback: PullbackCover, sample: JuliaSample, sample_map: np.ndarray) -> InductionDefects:
    sample_map = np.asarray(sample_map)
    uncovered, parent_misses, dropped = [], [], []
    parents: list[set[int]] = []
    for regions, members in zip(pullback.levels, region_members(pullback, sample)):
        uncovered.append(sample.n - len(set().union(*members)))
        dropped.append(sum(1 for it in members if not it))
        misses = 0
        if parents:
            for region, tile in zip(regions, members):
                parent = parents[region.parent]
                misses += sum(1 for p in tile if int(sample_map[p]) not in parent)
        parent_misses.append(misses)
        parents = members
    return InductionDefects(tuple(uncovered), tuple(parent_misses), tuple(dropped))
