import logging

import numpy as np

from qvista.covers import CoverSequence, ConditionRecord, Thresholds, TileId, VerificationReport, Verdict, judge, \
    tile_witness, cover_notes
from .table import ProximityTable


def _inner_constant(cover: CoverSequence, levels: np.ndarray) -> tuple[float, dict | None, dict[str, float]]:
    """Smallest C with a pair x, y in every n-tile (n < N) having m(x, y) <= n + C."""
    constant, witness, per_level = 0.0, None, {}
    for n in range(cover.depth):
        worst = -np.inf
        for tile in cover.level(n):
            excess = float(levels[np.ix_(tile.members, tile.members)].min() - n)
            worst = max(worst, excess)
            if excess > constant:
                constant = excess
                witness = tile_witness(tile.id, excess=excess)
        per_level[str(n)] = float(worst)
    return constant, witness, per_level


def _separated_constant(cover: CoverSequence, levels: np.ndarray, width: int) -> tuple[float, dict | None, dict[str, float]]:
    """Smallest C with m(x, y) <= n + C across every U_w-separated pair of n-tiles."""
    constant, witness, per_level = 0.0, None, {}
    for n in range(cover.depth + 1):
        geometry = cover.geometry(n)
        separated = geometry.separated(width)
        if not separated.any():
            continue
        members = [tile.members for tile in geometry.tiles]
        flat = np.concatenate(members)
        offsets = np.cumsum([0] + [len(it) for it in members[:-1]])
        worst = -np.inf
        for row, tile in enumerate(geometry.tiles):
            if not separated[row].any():
                continue
            farthest = np.maximum.reduceat(levels[tile.members][:, flat].max(axis=0), offsets)
            farthest = np.where(separated[row], farthest, -np.inf)
            column = int(np.argmax(farthest))
            excess = float(farthest[column]) - n
            worst = max(worst, excess)
            if excess > constant:
                constant = excess
                witness = tile_witness(tile.id, TileId(n, column), excess=excess)
        per_level[str(n)] = float(worst)
    return constant, witness, per_level


def triple_constant(levels: np.ndarray) -> tuple[float, tuple[int, int, int] | None]:
    """Smallest C with m(x, y) >= min(m(x, z), m(z, y)) - C over all triples."""
    values = levels.astype(np.int16)
    constant, witness = 0.0, None
    for z in range(values.shape[0]):
        excess = np.minimum(values[:, z, None], values[None, z, :]) - values
        position = int(np.argmax(excess))
        x, y = divmod(position, values.shape[0])
        if excess[x, y] > constant:
            constant = float(excess[x, y])
            witness = (x, y, z)
    return constant, witness


def check_combinatorially_visual(cover: CoverSequence,
                                 table: ProximityTable,
                                 thresholds: Thresholds,
                                 fallback: float) -> VerificationReport:
    levels = table.levels()
    report = VerificationReport('combinatorially-visual', cover.depth, table.width, notes=cover_notes(cover))

    unresolved = int(np.count_nonzero(table.unresolved_pairs()) // 2)
    report.add(ConditionRecord('cv.i', float(unresolved), None, Verdict.NOT_APPLICABLE,
                               {'unresolved_pairs': unresolved}))

    inner, inner_witness, inner_levels = _inner_constant(cover, levels)
    report.add(judge('cv.ii', inner, thresholds.threshold('cv.ii', fallback), inner_witness, inner_levels))

    separated, separated_witness, separated_levels = _separated_constant(cover, levels, table.width)
    report.add(judge('cv.iii', separated, thresholds.threshold('cv.iii', fallback), separated_witness,
                     separated_levels))

    triple, triple_witness = triple_constant(levels)
    report.add(judge('cv.iv', triple, thresholds.threshold('cv.iv', fallback),
                     None if triple_witness is None else {'points': list(triple_witness), 'excess': triple}))

    report.derived['c_cv'] = max(inner, separated, triple)
    report.derived['unresolved_pairs'] = unresolved
    logging.info(f'combinatorial check: C_cv={report.derived["c_cv"]:g} ({report.verdict})')
    return report
