import logging
import math
from dataclasses import dataclass
from typing import Any, Final

import numpy as np

from qvista.settings import VerificationSettings
from qvista.util.injector import component
from .cover import CoverSequence, TileId
from .errors import FitFailure, MissingLambda
from .report import ConditionRecord, Thresholds, VerificationReport, Verdict, judge, tile_witness


def comparability(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """max(a/b, b/a) elementwise, with 0/0 = 1 and x/0 = inf."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = np.maximum(a / b, b / a)
    return np.where((a == 0) & (b == 0), 1.0, ratios)


def shrink_ratio(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """inner/outer elementwise, where a zero inner diameter always shrinks."""
    outer, inner = np.broadcast_arrays(np.asarray(outer, dtype=float), np.asarray(inner, dtype=float))
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = inner / outer
    return np.where(inner == 0, 0.0, ratios)


def _masked_argmax(values: np.ndarray, mask: np.ndarray) -> tuple[float, tuple[int, ...]] | None:
    if not mask.any():
        return None
    masked = np.where(mask, values, -np.inf)
    position = np.unravel_index(int(np.argmax(masked)), masked.shape)
    return float(masked[position]), tuple(int(it) for it in position)


def cover_notes(cover: CoverSequence) -> list[str]:
    return [
        f'truncated at depth N={cover.depth}; constants cover levels 0..{cover.depth} only',
        'tiles are finite families of sample points',
    ]


@dataclass(frozen=True)
class RhoTauNu:
    rho: float
    tau: float
    nu: float
    c: float
    max_ratios: tuple[float, ...]
    min_ratios: tuple[float, ...]


@dataclass(frozen=True)
class QuasiBallBounds:
    inner: float
    outer: float
    inner_witness: dict[str, Any] | None
    outer_witness: dict[str, Any] | None


class _Worst:
    def __init__(self, initial: float = 0.0):
        self.constant = initial
        self.witness: dict[str, Any] | None = None
        self.per_level: dict[str, float] = {}

    def offer(self, key: str, found: tuple[float, tuple[int, ...]] | None, witness_of):
        if found is None:
            return
        value, position = found
        self.per_level[key] = value
        if value > self.constant or self.witness is None and value >= self.constant:
            self.constant = value
            self.witness = witness_of(position, value)


@component()
class CoverVerifier:
    def __init__(self, settings: VerificationSettings):
        self.__settings: Final[VerificationSettings] = settings

    def verify_visual(self,
                      cover: CoverSequence,
                      thresholds: Thresholds | None = None,
                      width: int | None = None) -> VerificationReport:
        lam = cover.visual_parameter
        if lam is None:
            raise MissingLambda('visual verification needs a visual parameter')
        w = cover.width if width is None else width
        thresholds = thresholds or Thresholds()
        fallback = self.__settings.threshold.get()

        diameter = _Worst(1.0)
        separation = _Worst(0.0)
        for n in range(cover.depth + 1):
            geometry = cover.geometry(n)
            scale = lam ** -n
            diameters = geometry.diameters
            ratios = comparability(diameters * lam ** n, np.ones_like(diameters))
            diameter.offer(str(n), _masked_argmax(ratios, np.ones_like(ratios, dtype=bool)),
                           lambda p, v: tile_witness(TileId(n, p[0]), ratio=v, diameter=float(diameters[p[0]])))

            separated = geometry.separated(w)
            with np.errstate(divide='ignore'):
                inverse = np.where(separated, scale / np.where(separated, geometry.distances, 1.0), 0.0)
            separation.offer(str(n), _masked_argmax(inverse, separated),
                             lambda p, v: tile_witness(TileId(n, p[0]), TileId(n, p[1]), ratio=v,
                                                       distance=float(geometry.distances[p])))

        report = VerificationReport('visual', cover.depth, w, notes=cover_notes(cover))
        report.derived['lambda'] = lam
        report.add(judge('visual.diameter', diameter.constant,
                         thresholds.threshold('visual.diameter', fallback), diameter.witness, diameter.per_level))
        report.add(judge('visual.separation', separation.constant,
                         thresholds.threshold('visual.separation', fallback), separation.witness,
                         separation.per_level))
        logging.info(f'visual check (depth {cover.depth}, width {w}, lambda {lam}): {report.verdict}')
        return report

    def verify_quasi_visual(self,
                            cover: CoverSequence,
                            thresholds: Thresholds | None = None,
                            width: int | None = None) -> VerificationReport:
        w = cover.width if width is None else width
        thresholds = thresholds or Thresholds()
        fallback = self.__settings.threshold.get()
        report = VerificationReport('quasi-visual', cover.depth, w, notes=cover_notes(cover))

        same_level = _Worst(1.0)
        separation = _Worst(0.0)
        for n in range(cover.depth + 1):
            geometry = cover.geometry(n)
            diameters = geometry.diameters
            ratios = comparability(diameters[:, None], diameters[None, :])
            same_level.offer(str(n), _masked_argmax(ratios, geometry.intersects),
                             lambda p, v: tile_witness(TileId(n, p[0]), TileId(n, p[1]), ratio=v))

            separated = geometry.separated(w)
            with np.errstate(divide='ignore'):
                relative = np.where(separated, diameters[:, None] / np.where(separated, geometry.distances, 1.0), 0.0)
            separation.offer(str(n), _masked_argmax(relative, separated),
                             lambda p, v: tile_witness(TileId(n, p[0]), TileId(n, p[1]), ratio=v))

        consecutive = _Worst(1.0)
        for n in range(cover.depth):
            upper = cover.geometry(n).diameters
            lower = cover.geometry(n + 1).diameters
            ratios = comparability(upper[:, None], lower[None, :])
            consecutive.offer(f'{n}:{n + 1}', _masked_argmax(ratios, cover.cross_intersections(n, n + 1)),
                              lambda p, v: tile_witness(TileId(n, p[0]), TileId(n + 1, p[1]), ratio=v))

        report.add(judge('qv.i', same_level.constant, thresholds.threshold('qv.i', fallback),
                         same_level.witness, same_level.per_level))
        report.add(judge('qv.ii', separation.constant, thresholds.threshold('qv.ii', fallback),
                         separation.witness, separation.per_level))
        report.add(judge('qv.iii', consecutive.constant, thresholds.threshold('qv.iii', fallback),
                         consecutive.witness, consecutive.per_level))
        report.add(self.__shrinking(cover, thresholds, report))
        logging.info(f'quasi-visual check (depth {cover.depth}, width {w}): {report.verdict}')
        return report

    def __shrink_at(self, cover: CoverSequence, k: int) -> tuple[float, dict[str, Any] | None]:
        worst = _Worst(0.0)
        for n in range(cover.depth - k + 1):
            ratios = shrink_ratio(cover.geometry(n).diameters[:, None], cover.geometry(n + k).diameters[None, :])
            worst.offer(str(n), _masked_argmax(ratios, cover.cross_intersections(n, n + k)),
                        lambda p, v: tile_witness(TileId(n, p[0]), TileId(n + k, p[1]), ratio=v))
        return worst.constant, worst.witness

    def __shrinking(self, cover: CoverSequence, thresholds: Thresholds, report: VerificationReport) -> ConditionRecord:
        target = thresholds.threshold('qv.iv', self.__settings.shrink_target.get())
        if cover.depth < 1:
            return ConditionRecord('qv.iv', 0.0, target, Verdict.NOT_APPLICABLE)

        first_constant, first_witness = None, None
        for k in range(1, max(cover.depth - 1, 1) + 1):
            constant, witness = self.__shrink_at(cover, k)
            if first_constant is None:
                first_constant, first_witness = constant, witness
            if constant <= target:
                report.derived['k0'] = k
                report.derived['lambda'] = constant
                return judge('qv.iv', constant, target, witness, {'k0': float(k)})
        report.derived['k0'] = None
        return judge('qv.iv', first_constant, target, first_witness, {'k0': 1.0})

    def derive_rho_tau_nu(self, cover: CoverSequence) -> RhoTauNu:
        gaps, largest, smallest = [], [], []
        for k in range(1, cover.depth + 1):
            ratios = []
            for n in range(cover.depth - k + 1):
                upper = cover.geometry(n).diameters
                lower = cover.geometry(n + k).diameters
                mask = cover.cross_intersections(n, n + k) & (upper[:, None] > 0) & (lower[None, :] > 0)
                if mask.any():
                    ratios.append((lower[None, :] / np.where(upper[:, None] > 0, upper[:, None], 1.0))[mask])
            if ratios:
                ratios = np.concatenate(ratios)
                gaps.append(k)
                largest.append(float(ratios.max()))
                smallest.append(float(ratios.min()))
        if not gaps:
            raise FitFailure('no intersecting cross-level pairs with positive diameters')

        gaps = np.asarray(gaps, dtype=float)
        rho = self.__fitted_base(gaps, np.asarray(largest))
        tau = self.__fitted_base(gaps, np.asarray(smallest))
        if not rho < 1:
            raise FitFailure(f'diameters do not shrink within depth {cover.depth} (rho={rho:.4g})')
        if not tau < 1:
            raise FitFailure(f'smallest diameter ratios do not decay (tau={tau:.4g})')
        tau = min(tau, rho)
        c = max(1.0, float(np.max(np.asarray(largest) / rho ** gaps)))
        nu = min(1.0, math.log(1 / rho) / math.log(1 / tau))
        logging.info(f'rho={rho:.4f} tau={tau:.4f} nu={nu:.4f} C={c:.3f}')
        return RhoTauNu(rho, tau, nu, c, tuple(largest), tuple(smallest))

    @staticmethod
    def __fitted_base(gaps: np.ndarray, ratios: np.ndarray) -> float:
        logs = np.log(ratios)
        if gaps.size == 1:
            return float(np.exp(logs[0] / gaps[0]))
        slope, _ = np.polyfit(gaps, logs, 1)
        return float(np.exp(slope))

    def quasiball_check(self, cover: CoverSequence, width: int | None = None) -> QuasiBallBounds:
        w = cover.width if width is None else width
        dist = cover.space.dist
        inner, outer = math.inf, 0.0
        inner_witness, outer_witness = None, None
        for n in range(cover.depth + 1):
            geometry = cover.geometry(n)
            neighbourhoods = geometry.neighbourhood_points(2 * w + 1)
            for row, tile in enumerate(geometry.tiles):
                diameter = geometry.diameters[row]
                if diameter == 0:
                    continue
                block = dist[tile.members]
                inside = neighbourhoods[row]
                farthest = block[:, inside].max() / diameter
                if farthest > outer:
                    outer, outer_witness = float(farthest), tile_witness(tile.id, ratio=float(farthest))
                if not inside.all():
                    nearest = block[:, ~inside].min() / diameter
                    if nearest < inner:
                        inner, inner_witness = float(nearest), tile_witness(tile.id, ratio=float(nearest))
        if math.isinf(inner):
            inner = outer
        return QuasiBallBounds(inner, outer, inner_witness, outer_witness)

    def quasiball_records(self, cover: CoverSequence, thresholds: Thresholds | None = None) -> list[ConditionRecord]:
        thresholds = thresholds or Thresholds()
        fallback = self.__settings.threshold.get()
        bounds = self.quasiball_check(cover)
        inverse_inner = math.inf if bounds.inner == 0 else 1.0 / bounds.inner
        return [
            judge('quasiball.inner', inverse_inner, thresholds.threshold('quasiball.inner', fallback),
                  bounds.inner_witness),
            judge('quasiball.outer', bounds.outer, thresholds.threshold('quasiball.outer', fallback),
                  bounds.outer_witness),
        ]

    @staticmethod
    def ball_tile_comparability(cover: CoverSequence, radius: float) -> float:
        """Largest diameter ratio over same-level tiles Y meeting the closed ball B(X, radius * diam X)."""
        constant = 1.0
        for n in range(cover.depth + 1):
            geometry = cover.geometry(n)
            diameters = geometry.diameters
            near = geometry.distances <= radius * diameters[:, None]
            if near.any():
                ratios = comparability(diameters[:, None], diameters[None, :])
                constant = max(constant, float(ratios[near].max()))
        return constant
