import numpy as np
import pytest

from qvista.builder import cantor, dyadic_interleaved, interval_dyadic
from qvista.covers import (CoverError, CoverSequence, EmptyTile, MissingLambda, NotACover, RootLevelError,
                           Thresholds, TileId, UnknownTile, Verdict, VerificationReport, comparability, judge,
                           shrink_ratio, u_w_neighborhood)
from qvista.metric import FiniteMetricSpace


@pytest.fixture
def three_points():
    return FiniteMetricSpace.from_coords([0.0, 1.0, 2.0])


class TestCoverSequence:
    def test_levels(self, dyadic_cover):
        assert dyadic_cover.depth == 3
        assert [len(it) for it in dyadic_cover.levels] == [1, 2, 4, 8]
        assert 16 in dyadic_cover.tile(TileId(1, 0))
        assert 16 in dyadic_cover.tile(TileId(1, 1))

    def test_root_must_be_whole_space(self, three_points):
        with pytest.raises(RootLevelError):
            CoverSequence(three_points, [[[0, 1]]])
        with pytest.raises(RootLevelError):
            CoverSequence(three_points, [])

    def test_not_a_cover(self, three_points):
        with pytest.raises(NotACover) as e:
            CoverSequence(three_points, [[[0, 1, 2]], [[0], [1]]])
        assert e.value.witness == 2

    def test_empty_tile(self, three_points):
        with pytest.raises(EmptyTile):
            CoverSequence(three_points, [[[0, 1, 2]], [[0, 1, 2], []]])

    def test_out_of_range(self, three_points):
        with pytest.raises(CoverError):
            CoverSequence(three_points, [[[0, 1, 2]], [[0, 1, 3]]])

    @pytest.mark.parametrize('width, lam', [(-1, None), (0, 1.0)])
    def test_bad_parameters(self, three_points, width, lam):
        with pytest.raises(CoverError):
            CoverSequence(three_points, [[[0, 1, 2]]], width, lam)

    def test_unknown_tile(self, dyadic_cover):
        with pytest.raises(UnknownTile):
            dyadic_cover.tile(TileId(4, 0))

    def test_u_w_neighborhood(self, dyadic_cover):
        assert u_w_neighborhood(dyadic_cover, TileId(2, 1), 0) == {TileId(2, 1)}
        assert u_w_neighborhood(dyadic_cover, TileId(2, 1), 1) == {TileId(2, 0), TileId(2, 1), TileId(2, 2)}
        assert len(u_w_neighborhood(dyadic_cover, TileId(2, 1), 5)) == 4

    def test_geometry(self, dyadic_cover):
        geometry = dyadic_cover.geometry(2)
        assert np.allclose(geometry.diameters, 0.25)
        assert geometry.distances[0, 1] == 0
        assert geometry.distances[0, 2] == pytest.approx(0.25)
        assert geometry.separated(0)[0, 2]
        assert not geometry.separated(1)[0, 2]

    def test_rebinding(self, dyadic_cover):
        assert dyadic_cover.with_width(2).width == 2
        assert dyadic_cover.truncated(1).depth == 1
        assert dyadic_cover.with_visual_parameter(None).visual_parameter is None
        with pytest.raises(CoverError):
            dyadic_cover.with_space(FiniteMetricSpace.from_coords([0.0, 1.0]))


class TestHelpers:
    def test_comparability(self):
        assert np.allclose(comparability([2.0, 0.0, 0.0], [1.0, 0.0, 1.0]), [2.0, 1.0, np.inf])

    def test_shrink_ratio(self):
        assert np.allclose(shrink_ratio([1.0, 0.0], [0.5, 0.0]), [0.5, 0.0])

    def test_thresholds(self):
        thresholds = Thresholds(default=10, conditions={'qv.i': 2})
        assert thresholds.threshold('qv.i', 64) == 2
        assert thresholds.threshold('qv.ii', 64) == 10
        assert Thresholds().threshold('qv.ii', 64) == 64

    def test_judge(self):
        assert judge('x', 3.0, 4.0, None).verdict == Verdict.PASS
        failed = judge('x', float('inf'), 4.0, None)
        assert failed.verdict == Verdict.FAIL
        assert failed.witness == {'reason': 'no finite constant'}

    def test_report_verdict(self):
        report = VerificationReport('test', 1, 0)
        report.add(judge('a', 1.0, 2.0, None))
        assert report.passed
        report.add(judge('b', 3.0, 2.0, {'tiles': []}))
        assert report.verdict == Verdict.FAIL
        assert report.record('b').constant == 3.0
        assert report.to_dict()['verdict'] == 'FAIL'


class TestVisual:
    def test_cantor(self, verifier, cantor_cover):
        report = verifier.verify_visual(cantor_cover)
        assert report.passed
        assert report.record('visual.diameter').constant == pytest.approx(1.0)
        assert report.record('visual.separation').constant <= 1.0 + 1e-12

    def test_interval(self, verifier, dyadic_cover):
        report = verifier.verify_visual(dyadic_cover)
        assert report.passed
        assert report.record('visual.separation').constant == pytest.approx(1.0)

    def test_needs_lambda(self, verifier):
        _, cover = dyadic_interleaved(3)
        with pytest.raises(MissingLambda):
            verifier.verify_visual(cover)


class TestQuasiVisual:
    def test_visual_covers_are_quasi_visual(self, verifier, cantor_cover, tree_cover):
        assert verifier.verify_quasi_visual(cantor_cover).passed
        assert verifier.verify_quasi_visual(tree_cover).passed

    def test_shrinking(self, verifier, cantor_cover):
        report = verifier.verify_quasi_visual(cantor_cover)
        assert report.record('qv.iv').constant == pytest.approx(1 / 3)
        assert report.derived['k0'] == 1

    def test_shrinking_not_applicable_at_depth_zero(self, verifier, cantor_cover):
        report = verifier.verify_quasi_visual(cantor_cover.truncated(0))
        assert report.record('qv.iv').verdict == Verdict.NOT_APPLICABLE

    def test_interleaved_consecutive_levels(self, verifier):
        _, cover = dyadic_interleaved(7)
        report = verifier.verify_quasi_visual(cover)
        consecutive = report.record('qv.iii')
        assert consecutive.per_level['2:3'] == pytest.approx(2)
        assert consecutive.per_level['4:5'] == pytest.approx(4)
        assert consecutive.per_level['6:7'] == pytest.approx(8)
        assert consecutive.constant == pytest.approx(8)

    def test_interleaved_fails_tight_threshold(self, verifier):
        _, cover = dyadic_interleaved(7)
        report = verifier.verify_quasi_visual(cover, Thresholds(conditions={'qv.iii': 4}))
        assert report.verdict == Verdict.FAIL
        witness = report.record('qv.iii').witness
        assert witness['tiles'][0][0] == 6
        assert witness['tiles'][1][0] == 7

    def test_notes_mention_truncation(self, verifier, cantor_cover):
        assert any('N=3' in it for it in verifier.verify_quasi_visual(cantor_cover).notes)


class TestDerivedConstants:
    def test_ball_tile_comparability(self, verifier, three_points, cantor_cover):
        trivial = CoverSequence(three_points, [[[0, 1, 2]], [[0, 1, 2]]])
        assert verifier.ball_tile_comparability(trivial, 2.0) == 1.0
        small = verifier.ball_tile_comparability(cantor_cover, 0.5)
        assert 1.0 <= small <= verifier.ball_tile_comparability(cantor_cover, 2.0) <= 3.0

    @pytest.mark.parametrize('depth', [3, 4])
    def test_zero_radius_ball_meets_intersecting_tiles(self, verifier, depth):
        _, cover = dyadic_interleaved(depth)
        same_level = verifier.verify_quasi_visual(cover).record('qv.i').constant
        assert verifier.ball_tile_comparability(cover, 0.0) == pytest.approx(same_level)

    def test_single_point_tiles_are_compared(self, verifier, three_points):
        cover = CoverSequence(three_points, [[[0, 1, 2]], [[0], [0, 1], [2]]])
        assert verifier.ball_tile_comparability(cover, 0.0) == np.inf

    @pytest.mark.parametrize('make, base', [(cantor, 1 / 3), (interval_dyadic, 1 / 2)])
    def test_rho_tau_nu(self, verifier, make, base):
        _, cover = make(3)
        fit = verifier.derive_rho_tau_nu(cover)
        assert fit.rho == pytest.approx(base)
        assert fit.tau == pytest.approx(base)
        assert fit.nu == pytest.approx(1.0)
        assert fit.c == pytest.approx(1.0)

    def test_quasiball(self, verifier, cantor_cover):
        bounds = verifier.quasiball_check(cantor_cover)
        assert 0 < bounds.inner <= bounds.outer
        assert bounds.outer == pytest.approx(1.0)
