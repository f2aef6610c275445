import math

import numpy as np
import pytest

from qvista.builder import angle_doubling_map, branching_tree, cantor, circle_arcs, interval_dyadic, \
    row_scaled_perturbation
from qvista.covers import Verdict
from qvista.proximity import (KTooLarge, LambdaTooLarge, MapNotClosed, PowerDistortion, QuasiMetric,
                              QuasiMetricViolation, chain_metrize, compute_proximity, infimum_gap_violation,
                              infimum_proximity, quasi_metric_from_m, require_self_map, triple_constant,
                              visual_characterization_constant)


class TestProximityTable:
    def test_cantor_levels(self, cantor_cover):
        table = compute_proximity(cantor_cover)
        assert table.sentinel == 4
        assert table.m[0, 1] == 4
        assert table.m[0, 2] == 2
        assert table.m[0, 15] == 0
        assert np.all(np.diag(table.m) == 4)
        assert table.levels()[0, 1] == 3
        assert np.count_nonzero(table.unresolved_pairs()) == 16

    def test_width_widens_proximity(self, dyadic_cover):
        assert compute_proximity(dyadic_cover, 1).m[0, 12] > compute_proximity(dyadic_cover, 0).m[0, 12]

    def test_infimum_is_one_level_deeper(self, cantor_cover):
        infimum = infimum_proximity(cantor_cover)
        assert infimum.m[0, 2] == 3
        assert infimum_gap_violation(infimum, compute_proximity(cantor_cover)) is None


class TestCombinatoriallyVisual:
    def test_nested_partitions(self, proximity_service, cantor_cover):
        report = proximity_service.check_combinatorially_visual(cantor_cover)
        assert report.passed
        assert report.derived['c_cv'] == 0
        assert report.record('cv.i').verdict == Verdict.NOT_APPLICABLE
        assert report.record('cv.i').constant == 8
        infimum_gap = report.record('proximity.infimum_gap')
        assert infimum_gap.verdict == Verdict.PASS
        assert infimum_gap.constant == 1

    def test_dyadic_intervals(self, proximity_service, dyadic_cover):
        report = proximity_service.check_combinatorially_visual(dyadic_cover)
        assert report.record('cv.ii').constant == 1
        assert report.record('cv.iii').constant == 1
        assert report.record('cv.iv').constant == 2
        assert report.record('cv.iv').witness['points'] is not None
        assert report.derived['c_cv'] == 2

    def test_triple_constant_of_ultrametric_levels(self):
        levels = np.array([[3, 1, 0], [1, 3, 0], [0, 0, 3]])
        assert triple_constant(levels) == (0.0, None)


class TestMetrization:
    def test_lambda_too_large(self, dyadic_cover):
        with pytest.raises(LambdaTooLarge):
            quasi_metric_from_m(compute_proximity(dyadic_cover), 2.0, 2)

    def test_k_too_large(self):
        q = np.array([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(KTooLarge):
            chain_metrize(QuasiMetric(q, 3.0))

    def test_violation(self):
        q = np.array([[0.0, 1.0], [2.0, 0.0]])
        assert isinstance(QuasiMetric(q, 1.0).violation(), QuasiMetricViolation)

    @pytest.mark.parametrize('make, lam', [(cantor, 3.0), (interval_dyadic, 1.4), (branching_tree, 2.0)])
    def test_sandwich(self, proximity_service, make, lam):
        _, cover = make(3)
        table = compute_proximity(cover)
        c_cv = proximity_service.check_combinatorially_visual(cover, table).derived['c_cv']
        quasi = quasi_metric_from_m(table, lam, c_cv)
        d = chain_metrize(quasi).dist
        off = ~np.eye(d.shape[0], dtype=bool)
        assert np.all(d[off] <= quasi.q[off] * (1 + 1e-9))
        assert np.all(d[off] >= quasi.q[off] / (2 * quasi.k) * (1 - 1e-9))

    def test_tree_is_exactly_visual(self, tree_cover):
        constant, _ = visual_characterization_constant(tree_cover.space, compute_proximity(tree_cover), 2.0)
        assert constant == pytest.approx(1.0, abs=1e-12)

    def test_cantor_characterization(self, proximity_service, cantor_cover):
        report = proximity_service.visual_characterization_check(cantor_cover, 3.0)
        assert report.passed
        assert report.record('visual.characterization').constant == pytest.approx(math.sqrt(3))


class TestSynthesis:
    @pytest.mark.parametrize('make, lam', [(cantor, 3.0), (interval_dyadic, 1.4), (branching_tree, 2.0)])
    def test_round_trip(self, proximity_service, make, lam):
        _, cover = make(3)
        space, report = proximity_service.synthesize_visual_metric(cover, lam)
        assert report.kind == 'synthesized-visual'
        assert report.passed
        assert report.record('visual.diameter').constant <= 64
        assert space.n == cover.space.n

    def test_tree_metric_is_recovered(self, proximity_service, tree_cover):
        space, report = proximity_service.synthesize_visual_metric(tree_cover, 2.0)
        assert report.derived['k'] == 2.0
        assert np.allclose(space.dist, tree_cover.space.dist)

    def test_dyadic_at_lambda_two_is_rejected(self, proximity_service, dyadic_cover):
        with pytest.raises(LambdaTooLarge):
            proximity_service.synthesize_visual_metric(dyadic_cover, 2.0)


class TestQuasisymmetry:
    def test_power_distortion(self):
        assert np.allclose(PowerDistortion(2.0, 0.5).eta([0.25, 4.0]), [1.0, 32.0])
        with pytest.raises(ValueError):
            PowerDistortion(0.5, 0.5)

    @pytest.mark.parametrize('make, lam', [(cantor, 3.0), (interval_dyadic, 1.4), (branching_tree, 2.0)])
    def test_synthesized_metric_is_quasisymmetric(self, proximity_service, make, lam):
        _, cover = make(3)
        space, _ = proximity_service.synthesize_visual_metric(cover, lam)
        fit = proximity_service.fit_power_quasisymmetry(cover.space, space)
        assert fit.verdict == Verdict.PASS
        assert fit.distortion.k >= 1
        assert 0 < fit.distortion.nu <= 1
        assert len(fit.k_by_nu) == 20

    def test_row_scaled_perturbation_is_not(self, proximity_service):
        _, cover = cantor(4)
        fit = proximity_service.fit_power_quasisymmetry(cover.space, row_scaled_perturbation(cover))
        assert fit.verdict == Verdict.FAIL
        assert fit.distortion is None
        assert min(fit.k_by_nu.values()) > 1e6

    def test_snowflake_between_visual_parameters(self, proximity_service, cantor_cover):
        coarse, _ = proximity_service.synthesize_visual_metric(cantor_cover, 2.0)
        fine, _ = proximity_service.synthesize_visual_metric(cantor_cover, 4.0)
        fit = proximity_service.snowflake_check(coarse, fine)
        assert fit.verdict == Verdict.PASS
        assert fit.alpha == pytest.approx(2.0, rel=1e-4)

    def test_mismatched_sizes(self, proximity_service, cantor_cover, tree_cover):
        with pytest.raises(ValueError):
            proximity_service.fit_power_quasisymmetry(cantor_cover.space, tree_cover.space)


class TestDynamics:
    @pytest.fixture
    def doubling(self):
        _, cover = circle_arcs(3, resolution=5)
        return cover, angle_doubling_map(5)

    def test_angle_doubling(self, proximity_service, doubling):
        cover, mapping = doubling
        report = proximity_service.dynamical_checks(cover, mapping)
        assert report.record('dyn.shift').constant == 0
        assert report.record('dyn.proximity').constant == 0
        assert report.record('dyn.shift').verdict == Verdict.PASS

    def test_exact_image_of_a_subsample(self, proximity_service, doubling):
        cover, mapping = doubling
        record = proximity_service.dynamical_checks(cover, mapping, exact_image=True).record('dyn.shift')
        assert record.verdict == Verdict.FAIL
        assert record.witness['exact']

    def test_tripling_breaks_tile_shift(self, proximity_service, doubling):
        cover, _ = doubling
        tripling = (3 * np.arange(cover.space.n)) % cover.space.n
        report = proximity_service.dynamical_checks(cover, tripling)
        assert report.record('dyn.shift').verdict == Verdict.FAIL

    def test_map_must_stay_in_sample(self):
        with pytest.raises(MapNotClosed):
            require_self_map(np.array([0, 2]), 2)
        with pytest.raises(ValueError):
            require_self_map(np.array([0, 1, 1]), 2)
