import logging
from typing import Final

from qvista.covers import ConditionRecord, CoverSequence, Thresholds, VerificationReport, Verdict, judge
from qvista.proximity import ProximityService
from qvista.tile_graph import TileGraph
from qvista.util.injector import component
from qvista.settings import VerificationSettings
from .checks import RegularityCheck, RegularityResult, classify, phi_injectivity_check, regularity_records, \
    regularity_spaces
from .geodesics import TieBreak
from .metric import BoundaryMetricApprox, boundary_metric, diameter_comparability, tie_break_sensitivity


@component()
class BoundaryService:
    def __init__(self, proximity_service: ProximityService, verification_settings: VerificationSettings):
        self.__proximity: Final = proximity_service
        self.__settings: Final = verification_settings

    def phi_regularity_check(self,
                             cover: CoverSequence,
                             boundary: BoundaryMetricApprox,
                             check: RegularityCheck = RegularityCheck.BOTH) -> RegularityResult:
        original, approximate = regularity_spaces(cover.space, boundary)
        snowflake = None
        if check != RegularityCheck.QS:
            snowflake = self.__proximity.snowflake_check(original, approximate)
        power = None
        if check == RegularityCheck.QS or (check == RegularityCheck.BOTH and snowflake.verdict != Verdict.PASS):
            power = self.__proximity.fit_power_quasisymmetry(original, approximate)
        return classify(snowflake, power, original.n)

    def analyze(self,
                cover: CoverSequence,
                lam: float | None = None,
                check: RegularityCheck = RegularityCheck.BOTH,
                graph: TileGraph | None = None,
                thresholds: Thresholds | None = None) -> tuple[BoundaryMetricApprox, VerificationReport]:
        thresholds = thresholds or Thresholds()
        graph = graph or TileGraph(cover)
        boundary = boundary_metric(cover, graph, lam, TieBreak.LOWEST)
        report = VerificationReport('boundary', cover.depth, cover.width, notes=[
            f'level-{cover.depth} approximation of the boundary',
            'completeness is vacuous for finite samples',
        ])
        for record in phi_injectivity_check(boundary):
            report.add(record)

        constant, pair = diameter_comparability(cover, boundary)
        report.add(judge('boundary.diameter', constant,
                         thresholds.threshold('boundary.diameter', self.__settings.threshold.get()),
                         None if pair is None else {'points': list(pair)}))

        change, margin = tie_break_sensitivity(cover, graph, boundary.lam)
        report.add(ConditionRecord('boundary.tie_break', change, 1.0,
                                   Verdict.PASS if change <= 1 and margin >= -0.5 else Verdict.FAIL,
                                   {'product_change': change, 'same_point_margin': margin}))

        result = self.phi_regularity_check(cover, boundary, check)
        for record in regularity_records(result):
            report.add(record)
        report.derived.update(lambda_infinity=boundary.lam, classification=str(result.classification),
                              representatives=result.points)
        logging.info(f'boundary analysis: {report.verdict}')
        return boundary, report
