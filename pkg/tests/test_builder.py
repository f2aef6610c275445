import numpy as np
import pytest

from qvista.builder import (BuildError, DoublingUnbounded, FixtureName, ResolutionExceeded, UnknownFixture,
                            adjust_radii, angle_doubling_map, branching_tree, cantor, circle_arcs,
                            color_separated_set, dichotomy_violation, fixture, interval_dyadic,
                            row_scaled_perturbation, sierpinski_gasket)
from qvista.covers import TileId, Verdict
from qvista.metric import maximal_separated_net, validate_metric


class TestFixtures:
    def test_cantor(self):
        space, cover = cantor(3)
        assert space.n == 16
        assert cover.visual_parameter == 3.0
        assert [len(it) for it in cover.levels] == [1, 2, 4, 8]

    def test_cantor_finer_resolution(self):
        space, cover = cantor(2, resolution=4)
        assert space.n == 32
        assert cover.geometry(2).diameters == pytest.approx([1 / 9] * 4)

    def test_interval_dyadic(self):
        space, cover = interval_dyadic(3)
        assert space.n == 33
        assert cover.visual_parameter == 2.0

    def test_branching_tree(self):
        space, cover = branching_tree(3)
        assert space.n == 24
        assert [len(it) for it in cover.levels] == [1, 1, 2, 6]

    def test_gasket_and_circle_are_metric(self):
        for make in (sierpinski_gasket, circle_arcs):
            space, cover = make(3, resolution=5)
            assert validate_metric(space).ok
            assert cover.depth == 3

    def test_circle_arcs_close_up(self):
        _, cover = circle_arcs(2, resolution=4)
        assert 0 in cover.tile(TileId(2, 3))

    def test_angle_doubling(self):
        assert angle_doubling_map(3).tolist() == [0, 2, 4, 6, 0, 2, 4, 6]

    def test_by_name(self):
        space, _ = fixture('cantor', 2, resolution=None, width=1)
        assert space.n == 8
        assert fixture(FixtureName.INTERVAL_DYADIC, 2)[1].depth == 2

    def test_tree_example_by_name(self):
        space, cover = fixture('tree_example_3_7', 3)
        assert space.n == 24
        assert space.coords[12].tolist() == [0, 1, 0, 0]
        assert space.dist[0, 12] == 0.5
        assert cover.member_lists() == branching_tree(3)[1].member_lists()

    def test_unknown(self):
        with pytest.raises(UnknownFixture):
            fixture('mandelbrot', 2)

    def test_row_scaled_perturbation(self):
        _, cover = cantor(3)
        perturbed = row_scaled_perturbation(cover)
        assert validate_metric(perturbed).ok
        assert perturbed.dist[0, 1] == pytest.approx(cover.space.dist[0, 1])
        assert perturbed.dist[0, 15] == pytest.approx(1e-9)


class TestColoring:
    @pytest.mark.parametrize('make, delta', [(cantor, 3.0 ** -2), (interval_dyadic, 1 / 8)])
    def test_dichotomy(self, make, delta):
        space, _ = make(4)
        colored = adjust_radii(space, color_separated_set(space, maximal_separated_net(space, delta)))
        assert all(1.0 <= it < 2.0 for it in colored.radii)
        assert dichotomy_violation(space, colored) is None

    def test_same_color_centers_are_far_apart(self):
        space, _ = interval_dyadic(6)
        net = maximal_separated_net(space, 1 / 64)
        colored = color_separated_set(space, net)
        members = np.asarray(net.members)
        colors = np.asarray(colored.colors)
        for color in set(colored.colors):
            same = members[colors == color]
            block = space.dist[np.ix_(same, same)]
            assert np.all(block[~np.eye(same.size, dtype=bool)] >= 10 / 64)

    def test_balls_need_radii(self):
        space, _ = cantor(2)
        with pytest.raises(ValueError):
            color_separated_set(space, maximal_separated_net(space, 0.2)).balls(space)


class TestCoverBuilder:
    @pytest.mark.parametrize('make, lam, depth', [(cantor, 3.0, 3), (interval_dyadic, 2.0, 4)])
    def test_width1_is_visual(self, builder, verifier, make, lam, depth):
        space, _ = make(4)
        cover = builder.build_visual_width1(space, lam, depth)
        assert cover.width == 1
        assert cover.depth == depth
        report = verifier.verify_visual(cover)
        assert report.passed
        assert report.record('visual.separation').constant <= 2.0
        assert report.record('visual.diameter').constant <= 4.0

    def test_width0(self, builder, verifier):
        space, _ = interval_dyadic(3)
        cover = builder.build_visual_width0(space, 2.0, 3)
        assert cover.width == 0
        assert verifier.verify_visual(cover).record('visual.diameter').constant <= 4.0

    def test_build_reports_dichotomy(self, builder):
        space, _ = interval_dyadic(3)
        cover, report = builder.build(space, 2.0, 3, width=0)
        assert cover.width == 0
        record = report.record('build.dichotomy')
        assert record.verdict == Verdict.PASS
        assert record.per_level == {'1': 0.0, '2': 0.0, '3': 0.0}

    def test_dichotomy_not_applicable_at_width1(self, builder):
        space, _ = cantor(3)
        cover, report = builder.build(space, 3.0, 2)
        assert cover.width == 1
        assert report.record('build.dichotomy').verdict == Verdict.NOT_APPLICABLE
        with pytest.raises(BuildError):
            builder.build(space, 3.0, 2, width=2)

    def test_resolution_exceeded(self, builder):
        space, _ = interval_dyadic(2)
        with pytest.raises(ResolutionExceeded) as e:
            builder.build_visual_width1(space, 2.0, 4)
        assert e.value.level == 4

    def test_bad_lambda(self, builder):
        space, _ = cantor(2)
        with pytest.raises(BuildError):
            builder.build_visual_width1(space, 1.0, 2)

    def test_doubling_cap(self, builder):
        space, _ = branching_tree(5)
        with pytest.raises(DoublingUnbounded) as e:
            builder.build_visual_width0(space, 2.0, 1)
        assert e.value.count == 6
