import numpy as np
import pytest

from qvista.builder import branching_tree, cantor, dyadic_interleaved, interval_dyadic
from qvista.covers import TileId, Verdict
from qvista.proximity import compute_proximity
from qvista.tile_graph import (ScanMode, TileGraph, TripleBudgetExceeded, UnknownVertex, cluster,
                               cluster_cover_sequence, compare_m_gromov, extended_proximity,
                               extended_proximity_matrix, extended_triangle_constant, graph_map_check,
                               gromov_product, hyperbolicity_bound, hyperbolicity_constant)


@pytest.fixture
def cantor_graph(cantor_cover):
    return TileGraph(cantor_cover)


class TestTileGraph:
    def test_vertices_and_edges(self, cantor_graph):
        assert cantor_graph.size == 15
        assert cantor_graph.vertex(0) == TileId(0, 0)
        assert len(cantor_graph.to_json_dict()['edges']) == 14

    def test_same_level_edges(self, dyadic_cover):
        graph = TileGraph(dyadic_cover)
        assert graph.distance(TileId(3, 0), TileId(3, 1)) == 1
        assert graph.distance(TileId(3, 0), TileId(3, 7)) == 5

    def test_distances_and_products(self, cantor_graph):
        assert cantor_graph.distance(TileId(3, 0), TileId(3, 1)) == 2
        assert cantor_graph.distance(TileId(3, 0), TileId(3, 7)) == 6
        assert gromov_product(cantor_graph, TileId(3, 0), TileId(3, 1)) == 2.0
        assert gromov_product(cantor_graph, TileId(3, 0), TileId(3, 7)) == 0.0
        assert gromov_product(cantor_graph, TileId(2, 1), TileId(2, 1)) == 2.0

    def test_unknown_vertex(self, cantor_graph):
        with pytest.raises(UnknownVertex):
            cantor_graph.index(TileId(1, 2))
        with pytest.raises(UnknownVertex):
            cantor_graph.vertex(15)


class TestHyperbolicity:
    @pytest.mark.parametrize('make', [cantor, branching_tree])
    def test_tree_like_graphs(self, make):
        _, cover = make(3)
        assert hyperbolicity_constant(TileGraph(cover)).constant == 0

    def test_interval(self, dyadic_cover):
        result = hyperbolicity_constant(TileGraph(dyadic_cover))
        assert not result.lower_bound
        assert result.constant >= 0
        assert (2 * result.constant).is_integer()
        assert result.triples == 15 ** 3

    def test_sampled_is_a_lower_bound(self, dyadic_cover):
        graph = TileGraph(dyadic_cover)
        sampled = hyperbolicity_constant(graph, ScanMode.SAMPLED, samples=5000, seed=1)
        assert sampled.lower_bound
        assert sampled.constant <= hyperbolicity_constant(graph).constant

    def test_vertex_cap(self, cantor_graph):
        with pytest.raises(TripleBudgetExceeded):
            hyperbolicity_constant(cantor_graph, vertex_cap=10)


class TestComparison:
    def test_extended_proximity(self, cantor_graph, cantor_cover):
        table = compute_proximity(cantor_cover)
        extended = extended_proximity_matrix(cantor_graph, table)
        assert extended_proximity(cantor_graph, table, TileId(1, 0), TileId(1, 1)) == 0
        assert extended[cantor_graph.index(TileId(2, 0)), cantor_graph.index(TileId(2, 1))] == 1
        assert extended_triangle_constant(cantor_graph, extended) == (0.0, None)

    def test_cantor_matches_gromov_products(self, cantor_graph, cantor_cover):
        comparison = compare_m_gromov(cantor_graph, compute_proximity(cantor_cover))
        assert comparison.constant == 0
        assert comparison.levgr_constant == 0
        assert hyperbolicity_bound(comparison, 0) == 0

    @pytest.mark.parametrize('make', [cantor, branching_tree])
    def test_stable_in_depth(self, make):
        constants = []
        for depth in (3, 4):
            _, cover = make(depth)
            constants.append(compare_m_gromov(TileGraph(cover), compute_proximity(cover)).constant)
        assert abs(constants[0] - constants[1]) <= 1


class TestClusters:
    def test_cluster(self, cantor_graph):
        assert cluster(cantor_graph, TileId(3, 0), 0).tolist() == [0, 1]
        assert cluster(cantor_graph, TileId(3, 0), 1).tolist() == [0, 1, 2, 3]
        with pytest.raises(ValueError):
            cluster(cantor_graph, TileId(3, 0), -1)

    def test_radius_zero_is_identity(self, cantor_graph):
        clustered = TileGraph(cluster_cover_sequence(cantor_graph, 0))
        check = graph_map_check(cantor_graph, clustered, 0)
        assert check.verdict == Verdict.PASS

    @pytest.mark.parametrize('make', [cantor, interval_dyadic])
    @pytest.mark.parametrize('r', [0, 1, 2])
    def test_lower_bound_holds(self, make, r):
        _, cover = make(3)
        graph = TileGraph(cover)
        check = graph_map_check(graph, TileGraph(cluster_cover_sequence(graph, r)), r)
        assert check.lower_slack <= 0

    def test_level_constraint_breaks_upper_bound(self, cantor_graph):
        # 3:0 and 3:7 are 6 apart but their clusters are still 4 apart, one edge per level
        # change: 3 * 4 exceeds 6 + 3 by 3
        check = graph_map_check(cantor_graph, TileGraph(cluster_cover_sequence(cantor_graph, 1)), 1)
        assert check.verdict == Verdict.FAIL
        assert check.upper_slack == 3

    def test_clusters_repair_interleaved_levels(self, verifier):
        _, cover = dyadic_interleaved(7)
        clustered = cluster_cover_sequence(TileGraph(cover), 1, width=1)
        assert clustered.width == 1
        assert verifier.verify_quasi_visual(clustered).passed

    def test_size_mismatch(self, cantor_graph, tree_cover):
        with pytest.raises(ValueError):
            graph_map_check(cantor_graph, TileGraph(tree_cover), 0)


class TestTileGraphService:
    def test_cantor(self, tile_graph_service, cantor_cover):
        graph, report = tile_graph_service.analyze(cantor_cover, cluster_r=0)
        assert graph.size == 15
        assert report.passed
        assert report.record('graph.bound').verdict == Verdict.PASS
        assert report.record('graph.cluster_map').verdict == Verdict.PASS
        assert report.record('graph.extended_triangle').constant == 0
        assert report.derived['hyperbolicity'] == 0

    def test_branching_tree_bound(self, tile_graph_service, tree_cover):
        _, report = tile_graph_service.analyze(tree_cover)
        assert report.record('graph.bound').verdict == Verdict.PASS
        assert report.record('graph.extended_triangle').verdict == Verdict.PASS
        assert report.record('graph.bound').threshold == 3

    def test_sampled_mode_notes(self, tile_graph_service, cantor_cover):
        _, report = tile_graph_service.analyze(cantor_cover, ScanMode.SAMPLED)
        assert any('lower bound' in it for it in report.notes)

    def test_exact_cap(self, tile_graph_service, verification_settings):
        _, cover = interval_dyadic(4)
        verification_settings.exact_vertex_cap.set(10)
        with pytest.raises(TripleBudgetExceeded):
            tile_graph_service.analyze(cover)
        assert np.isfinite(tile_graph_service.analyze(cover, ScanMode.SAMPLED)[1].derived['hyperbolicity'])
