import logging

import numpy as np

from qvista.covers import CoverSequence, ConditionRecord, Thresholds, VerificationReport, Verdict, judge, \
    tile_witness, cover_notes
from .errors import MapNotClosed
from .table import ProximityTable


def require_self_map(sample_map: np.ndarray, n: int) -> np.ndarray:
    sample_map = np.asarray(sample_map)
    if sample_map.shape != (n,):
        raise ValueError(f'sample map must have one image per point, got shape {sample_map.shape}')
    outside = np.flatnonzero((sample_map < 0) | (sample_map >= n))
    if outside.size:
        raise MapNotClosed(int(outside[0]), int(sample_map[outside[0]]))
    return sample_map.astype(int)


def iterate(sample_map: np.ndarray, times: int) -> np.ndarray:
    image = np.arange(sample_map.size)
    for _ in range(times):
        image = sample_map[image]
    return image


def tile_shift_record(cover: CoverSequence, sample_map: np.ndarray, exact_image: bool) -> ConditionRecord:
    """Counts (n+1)-tiles whose image is not inside (or, in exact mode, equal to) some n-tile."""
    failures, witness = 0, None
    for n in range(1, cover.depth):
        membership = cover.geometry(n).membership
        sizes = membership.sum(axis=1)
        for tile in cover.level(n + 1):
            image = np.unique(sample_map[tile.members])
            containing = membership[:, image].all(axis=1)
            if exact_image:
                containing &= sizes == image.size
            if not containing.any():
                failures += 1
                if witness is None:
                    witness = tile_witness(tile.id, image_size=int(image.size), exact=exact_image)
    return judge('dyn.shift', float(failures), 0.0, witness)


def proximity_decay_record(table: ProximityTable, sample_map: np.ndarray) -> ConditionRecord:
    """Largest deficit in m(g^k x, g^k y) >= min(m(x, y), N) - k over all pairs and 1 <= k <= N."""
    capped = np.minimum(table.m, table.depth)
    deficit, witness, per_level = 0.0, None, {}
    for k in range(1, table.depth + 1):
        image = iterate(sample_map, k)
        gap = (capped - k) - table.m[np.ix_(image, image)]
        position = np.unravel_index(int(np.argmax(gap)), gap.shape)
        per_level[str(k)] = float(gap[position])
        if gap[position] > deficit:
            deficit = float(gap[position])
            witness = {'points': [int(it) for it in position], 'iterate': k, 'deficit': deficit}
    return judge('dyn.proximity', deficit, 0.0, witness, per_level)


def distortion_record(cover: CoverSequence,
                      sample_map: np.ndarray,
                      nu: float,
                      radius: float,
                      threshold: float) -> ConditionRecord:
    """C(R) = max d(g^n x, g^n y) / (d(x, y) / diam Z)^nu over x, y within R diam Z of an (n+1)-tile Z."""
    dist = cover.space.dist
    constant, witness, per_level = 0.0, None, {}
    for n in range(1, cover.depth):
        image = iterate(sample_map, n)
        geometry = cover.geometry(n + 1)
        worst = 0.0
        for row, tile in enumerate(geometry.tiles):
            diameter = geometry.diameters[row]
            if diameter == 0:
                continue
            near = np.flatnonzero(dist[tile.members].min(axis=0) < radius * diameter)
            if near.size < 2:
                continue
            source = dist[np.ix_(near, near)]
            target = dist[np.ix_(image[near], image[near])]
            off = ~np.eye(near.size, dtype=bool)
            ratios = np.zeros_like(source)
            ratios[off] = target[off] / (source[off] / diameter) ** nu
            i, j = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
            worst = max(worst, float(ratios[i, j]))
            if ratios[i, j] > constant:
                constant = float(ratios[i, j])
                witness = tile_witness(tile.id, points=[int(near[i]), int(near[j])], ratio=constant)
        per_level[str(n)] = worst
    return judge('dyn.distortion', constant, threshold, witness, per_level)


def dynamical_checks(cover: CoverSequence,
                     sample_map: np.ndarray,
                     table: ProximityTable,
                     nu: float | None,
                     radius: float,
                     thresholds: Thresholds,
                     fallback: float,
                     exact_image: bool = False) -> VerificationReport:
    sample_map = require_self_map(sample_map, cover.space.n)
    report = VerificationReport('dynamical', cover.depth, table.width, notes=cover_notes(cover))
    report.add(tile_shift_record(cover, sample_map, exact_image))
    report.add(proximity_decay_record(table, sample_map))
    if nu is None:
        report.add(ConditionRecord('dyn.distortion', 0.0, None, Verdict.NOT_APPLICABLE))
        report.notes.append('no diameter decay to fit an exponent from; distortion bound not applicable')
    else:
        report.add(distortion_record(cover, sample_map, nu, radius,
                                     thresholds.threshold('dyn.distortion', fallback)))
        report.derived['nu'] = nu
        report.derived['distortion_radius'] = radius
    logging.info(f'dynamical checks (depth {cover.depth}): {report.verdict}')
    return report
