import logging
from dataclasses import dataclass
from typing import Final, Sequence

import numpy as np

from qvista.covers import ConditionRecord, CoverSequence, CoverVerifier, FitFailure, Thresholds, VerificationReport, \
    judge
from qvista.proximity import ProximityService
from qvista.settings import JuliaSettings, RunSettings
from qvista.util.clock import timed
from qvista.util.injector import component
from .errors import ResolutionInsufficient
from .grid import SphereGrid
from .probes import DegreeProbe, DistortionConfig, DistortionProbe, degree_probe, distortion_probe
from .pullback import PullbackCover, admissible_cover, pullback_cover
from .rational_map import RationalMap
from .sampling import JuliaSample, invariance_defect, julia_sample, sample_map
from .tiles import InductionDefects, induce_tiles, induction_defects


@dataclass(frozen=True, eq=False)
class DynamicalCover:
    pullback: PullbackCover
    cover: CoverSequence
    sample_map: np.ndarray
    projection_error: float
    radius: float
    invariance: float
    defects: InductionDefects


@component()
class JuliaService:
    def __init__(self,
                 verifier: CoverVerifier,
                 proximity_service: ProximityService,
                 julia_settings: JuliaSettings,
                 run_settings: RunSettings):
        self.__verifier: Final = verifier
        self.__proximity: Final = proximity_service
        self.__settings: Final = julia_settings
        self.__run_settings: Final = run_settings

    def sample(self, g: RationalMap, depth: int, seed_point: complex | None = None) -> JuliaSample:
        sample = julia_sample(g, depth,
                              self.__settings.target_samples.get(),
                              self.__run_settings.seed.get(),
                              seed_point,
                              self.__settings.root_tolerance.get())
        logging.debug(f'sample of {sample.n} points, invariance ratio {invariance_defect(g, sample):.3g}')
        return sample

    def build_cover(self,
                    g: RationalMap,
                    sample: JuliaSample,
                    radius: float,
                    levels: int,
                    grid_size: int | None = None) -> DynamicalCover:
        size = grid_size or self.__settings.grid_size.get()
        largest = max(size, self.__settings.max_grid_size.get())
        while True:
            try:
                with timed(f'pull-back on a {size} grid') as clock:
                    grid = SphereGrid(size)
                    first = admissible_cover(sample, grid, radius)
                    clock.lap('admissible cover')
                    pullback = pullback_cover(g, sample, grid, first, levels)
                    clock.lap('pull-back')
                break
            except ResolutionInsufficient as e:
                if 2 * size > largest:
                    raise
                logging.warning(f'{e}; refining the grid to {2 * size}')
                size *= 2
        mapping, error = sample_map(g, sample)
        cover = induce_tiles(pullback, sample)
        return DynamicalCover(pullback, cover, mapping, error, radius, invariance_defect(g, sample),
                              induction_defects(pullback, sample, mapping))

    def verify_dynamical_qv(self,
                            cover: CoverSequence,
                            mapping: np.ndarray,
                            thresholds: Thresholds | None = None) -> VerificationReport:
        report = self.__verifier.verify_quasi_visual(cover, thresholds, 1)
        report.kind = 'dynamical-quasi-visual'
        report.extend(self.__proximity.dynamical_checks(cover.with_width(1), mapping, thresholds=thresholds))
        try:
            fit = self.__verifier.derive_rho_tau_nu(cover)
            report.derived.update(rho=fit.rho, tau=fit.tau, nu=fit.nu)
        except FitFailure as e:
            report.notes.append(f'no diameter decay fit: {e}')
        if all(len(family) == 1 for family in cover.levels):
            report.notes.append('degenerate cover: one tile per level')
        return report

    @staticmethod
    def construction_records(built: DynamicalCover, thresholds: Thresholds | None = None) -> list[ConditionRecord]:
        """Forward invariance of the sample, and how well the sample fits the pulled-back regions."""
        thresholds = thresholds or Thresholds()
        defects = built.defects

        def first_level(counts: tuple[int, ...]) -> dict[str, int] | None:
            level = next((n for n, it in enumerate(counts, start=1) if it), None)
            return None if level is None else {'level': level, 'count': counts[level - 1]}

        return [
            judge('julia.invariance', built.invariance, thresholds.threshold('julia.invariance', 1.0),
                  {'projection_error': built.projection_error}),
            judge('julia.uncovered', sum(defects.uncovered), thresholds.threshold('julia.uncovered', 0.0),
                  first_level(defects.uncovered), InductionDefects.per_level(defects.uncovered)),
            judge('julia.parent_image', sum(defects.parent_misses), thresholds.threshold('julia.parent_image', 0.0),
                  first_level(defects.parent_misses), InductionDefects.per_level(defects.parent_misses)),
        ]

    def run(self,
            g: RationalMap,
            depth: int,
            radius: float,
            levels: int,
            thresholds: Thresholds | None = None,
            grid_size: int | None = None) -> tuple[DynamicalCover, VerificationReport]:
        sample = self.sample(g, depth)
        built = self.build_cover(g, sample, radius, levels, grid_size)
        report = self.verify_dynamical_qv(built.cover, built.sample_map, thresholds)
        for record in self.construction_records(built, thresholds):
            report.add(record)
        report.derived.update(samples=sample.n, mesh=sample.mesh, projection_error=built.projection_error,
                              grid_size=built.pullback.grid.size,
                              regions=[len(it) for it in built.pullback.levels])
        return built, report

    def degree_probe(self, g: RationalMap, center: complex, radius: float, iterates: int) -> DegreeProbe:
        return degree_probe(g, center, radius, iterates,
                            self.__settings.lifting_steps.get(),
                            self.__run_settings.seed.get())

    def distortion_probe(self, g: RationalMap, configs: Sequence[DistortionConfig]) -> DistortionProbe:
        return distortion_probe(g, configs, tolerance=max(self.__settings.root_tolerance.get(), 1e-6))
