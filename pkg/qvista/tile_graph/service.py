import logging
from typing import Final

from qvista.covers import CoverSequence, Thresholds, VerificationReport, Verdict, ConditionRecord, judge
from qvista.proximity import ProximityService, ProximityTable, compute_proximity
from qvista.settings import RunSettings, VerificationSettings
from qvista.util.injector import component
from .clusters import cluster_cover_sequence, graph_map_check
from .comparison import compare_m_gromov, extended_proximity_matrix, extended_triangle_constant, hyperbolicity_bound
from .graph import TileGraph
from .hyperbolicity import ScanMode, hyperbolicity_constant


@component()
class TileGraphService:
    def __init__(self,
                 proximity_service: ProximityService,
                 verification_settings: VerificationSettings,
                 run_settings: RunSettings):
        self.__proximity: Final = proximity_service
        self.__settings: Final = verification_settings
        self.__run_settings: Final = run_settings

    def hyperbolicity(self, graph: TileGraph, mode: ScanMode = ScanMode.EXACT):
        return hyperbolicity_constant(graph, mode,
                                      self.__settings.exact_vertex_cap.get(),
                                      self.__settings.sampled_triples.get(),
                                      self.__run_settings.seed.get())

    def analyze(self,
                cover: CoverSequence,
                mode: ScanMode = ScanMode.EXACT,
                cluster_r: int | None = None,
                table: ProximityTable | None = None,
                thresholds: Thresholds | None = None) -> tuple[TileGraph, VerificationReport]:
        thresholds = thresholds or Thresholds()
        fallback = self.__settings.threshold.get()
        table = table or compute_proximity(cover)
        graph = TileGraph(cover)
        report = VerificationReport('tile-graph', cover.depth, table.width,
                                    notes=['hyperbolicity uses the base-point triple condition'])

        delta = self.hyperbolicity(graph, mode)
        report.add(judge('graph.hyperbolicity', delta.constant,
                         thresholds.threshold('graph.hyperbolicity', fallback),
                         None if delta.witness is None else
                         {'tiles': [graph.vertex(it).as_list() for it in delta.witness]}))
        if delta.lower_bound:
            report.notes.append(f'sampled {delta.triples} triples: hyperbolicity is a lower bound only')

        comparison = compare_m_gromov(graph, table)
        witness = None if comparison.witness is None else {'tiles': [it.as_list() for it in comparison.witness]}
        report.add(judge('graph.comparison', comparison.constant,
                         thresholds.threshold('graph.comparison', fallback), witness))
        report.add(judge('graph.levgr', comparison.levgr_constant,
                         thresholds.threshold('graph.levgr', fallback), witness))

        combinatorial = self.__proximity.check_combinatorially_visual(cover, table, thresholds)
        c_cv = combinatorial.derived['c_cv']
        triangle, triple = extended_triangle_constant(graph, extended_proximity_matrix(graph, table))
        if combinatorial.passed:
            report.add(judge('graph.extended_triangle', triangle, c_cv,
                             None if triple is None else {'tiles': [it.as_list() for it in triple]}))
        else:
            report.add(ConditionRecord('graph.extended_triangle', triangle, None, Verdict.NOT_APPLICABLE))
        bound = hyperbolicity_bound(comparison, c_cv)
        if combinatorial.passed and delta.constant > bound:
            report.add(ConditionRecord('graph.bound', delta.constant, bound, Verdict.FAIL,
                                       {'c_cv': c_cv, 'comparison': comparison.constant}))
        else:
            report.add(ConditionRecord('graph.bound', delta.constant, bound,
                                       Verdict.PASS if combinatorial.passed else Verdict.NOT_APPLICABLE))

        report.derived.update(vertices=graph.size, hyperbolicity=delta.constant,
                              comparison=comparison.constant, c_cv=c_cv)
        if cluster_r is not None:
            clustered = TileGraph(cluster_cover_sequence(graph, cluster_r))
            check = graph_map_check(graph, clustered, cluster_r)
            report.add(ConditionRecord('graph.cluster_map', float(max(check.lower_slack, check.upper_slack)), 0.0,
                                       check.verdict,
                                       {'lower': [it.as_list() for it in check.lower_witness],
                                        'upper': [it.as_list() for it in check.upper_witness]}))
            report.derived['cluster_r'] = cluster_r
        logging.info(f'tile graph analysis: {report.verdict}')
        return graph, report
