import logging
from typing import Final

import numpy as np

from qvista.covers import CoverSequence, CoverVerifier, FitFailure, Thresholds, VerificationReport, judge
from qvista.metric import FiniteMetricSpace
from qvista.settings import RunSettings, VerificationSettings
from qvista.util.injector import component
from .combinatorial import check_combinatorially_visual
from .dynamics import dynamical_checks
from .metrization import chain_metrize, quasi_metric_from_m, visual_characterization_constant
from .quasisymmetry import PowerDistortionFit, SnowflakeFit, fit_power_quasisymmetry, snowflake_check
from .table import ProximityTable, compute_proximity, infimum_gap_violation, infimum_proximity


@component()
class ProximityService:
    def __init__(self,
                 verifier: CoverVerifier,
                 verification_settings: VerificationSettings,
                 run_settings: RunSettings):
        self.__verifier: Final = verifier
        self.__settings: Final = verification_settings
        self.__run_settings: Final = run_settings

    def check_combinatorially_visual(self,
                                     cover: CoverSequence,
                                     table: ProximityTable | None = None,
                                     thresholds: Thresholds | None = None) -> VerificationReport:
        table = table or compute_proximity(cover)
        report = check_combinatorially_visual(cover, table, thresholds or Thresholds(),
                                              self.__settings.combinatorial_threshold.get())
        infimum = infimum_proximity(cover, table.width)
        gap = np.where(table.is_sentinel(), 0, infimum.m - table.m)
        pair = infimum_gap_violation(infimum, table)
        report.add(judge('proximity.infimum_gap', float(gap.max(initial=0)), 1.0,
                         None if pair is None else {'points': list(pair)}))
        return report

    def synthesize_visual_metric(self,
                                 cover: CoverSequence,
                                 lam: float,
                                 thresholds: Thresholds | None = None) -> tuple[FiniteMetricSpace, VerificationReport]:
        table = compute_proximity(cover)
        combinatorial = self.check_combinatorially_visual(cover, table, thresholds)
        c_cv = combinatorial.derived['c_cv']
        quasi = quasi_metric_from_m(table, lam, c_cv)
        space = chain_metrize(quasi)
        report = self.__verifier.verify_visual(cover.with_space(space).with_visual_parameter(lam), thresholds)
        report.kind = 'synthesized-visual'
        report.records = [*combinatorial.records, *report.records]
        report.derived.update(c_cv=c_cv, k=quasi.k)
        logging.info(f'synthesized metric with K={quasi.k:.4g}: {report.verdict}')
        return space, report

    def visual_characterization_check(self,
                                      cover: CoverSequence,
                                      lam: float,
                                      space: FiniteMetricSpace | None = None,
                                      table: ProximityTable | None = None,
                                      thresholds: Thresholds | None = None) -> VerificationReport:
        space = space or cover.space
        table = table or compute_proximity(cover)
        constant, pair = visual_characterization_constant(space, table, lam)
        report = VerificationReport('visual-characterization', cover.depth, table.width)
        threshold = (thresholds or Thresholds()).threshold('visual.characterization', self.__settings.threshold.get())
        report.add(judge('visual.characterization', constant, threshold,
                         None if pair is None else {'points': list(pair), 'ratio': constant}))
        report.derived['lambda'] = lam
        return report

    def fit_power_quasisymmetry(self, space_d1: FiniteMetricSpace, space_d2: FiniteMetricSpace) -> PowerDistortionFit:
        return fit_power_quasisymmetry(space_d1, space_d2,
                                       self.__settings.nu_grid(),
                                       self.__settings.distortion_cap.get(),
                                       self.__settings.knee_factor.get(),
                                       self.__settings.qs_max_points.get(),
                                       self.__run_settings.seed.get())

    def snowflake_check(self, space_d1: FiniteMetricSpace, space_d2: FiniteMetricSpace) -> SnowflakeFit:
        return snowflake_check(space_d1, space_d2, self.__settings.snowflake_log_threshold.get())

    def dynamical_checks(self,
                         cover: CoverSequence,
                         sample_map: np.ndarray,
                         table: ProximityTable | None = None,
                         radius: float = 1.0,
                         thresholds: Thresholds | None = None,
                         exact_image: bool = False) -> VerificationReport:
        table = table or compute_proximity(cover)
        try:
            nu = self.__verifier.derive_rho_tau_nu(cover).nu
        except FitFailure as e:
            logging.info(f'no distortion exponent: {e}')
            nu = None
        return dynamical_checks(cover, sample_map, table, nu, radius, thresholds or Thresholds(),
                                self.__settings.threshold.get(), exact_image)
