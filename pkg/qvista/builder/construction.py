import logging
from typing import Final

import numpy as np

from qvista.covers import ConditionRecord, CoverSequence, VerificationReport, Verdict, judge
from qvista.metric import FiniteMetricSpace, maximal_separated_net, doubling_probe, uniform_perfectness_probe
from qvista.settings import RunSettings, VerificationSettings
from qvista.util.clock import timed
from qvista.util.injector import component
from qvista.util.parallel import parallel_map
from .coloring import adjust_radii, ball_members, color_separated_set, dichotomy_violation
from .errors import BuildError, DoublingUnbounded, ResolutionExceeded


@component()
class CoverBuilder:
    def __init__(self,
                 verification_settings: VerificationSettings,
                 run_settings: RunSettings):
        self.__verification_settings: Final = verification_settings
        self.__run_settings: Final = run_settings

    def build_visual_width1(self,
                            space: FiniteMetricSpace,
                            lam: float,
                            depth: int,
                            closed: bool = False) -> CoverSequence:
        self.__check_scales(space, lam, depth)

        def build_level(n: int) -> list[np.ndarray]:
            delta = lam ** -n
            net = maximal_separated_net(space, delta)
            return [ball_members(space, x, 2 * delta, closed) for x in net.members]

        with timed(f'width-1 build of depth {depth}'):
            levels = parallel_map(build_level, range(1, depth + 1), self.__run_settings.threads.get())
        self.__log_levels(levels)
        return CoverSequence(space, [[space.points], *levels], 1, lam)

    def build_visual_width0(self,
                            space: FiniteMetricSpace,
                            lam: float,
                            depth: int,
                            closed: bool = False) -> CoverSequence:
        return self.__build_width0(space, lam, depth, closed)[0]

    def build(self,
              space: FiniteMetricSpace,
              lam: float,
              depth: int,
              width: int = 1,
              closed: bool = False) -> tuple[CoverSequence, VerificationReport]:
        """Builds a cover of width 0 or 1 with a report of the construction invariants."""
        if width not in (0, 1):
            raise BuildError(f'covers are built at width 0 or 1, got {width}')
        if width == 1:
            cover = self.build_visual_width1(space, lam, depth, closed)
            report = VerificationReport('build', depth, 1)
            report.add(ConditionRecord('build.dichotomy', 0.0, None, Verdict.NOT_APPLICABLE))
            return cover, report

        cover, violations = self.__build_width0(space, lam, depth, closed)
        report = VerificationReport('build', depth, 0)
        failed = {n: it for n, it in enumerate(violations, start=1) if it is not None}
        witness = None
        if failed:
            n = min(failed)
            x, y, gap = failed[n]
            witness = {'level': n, 'centers': [x, y], 'gap': gap}
        report.add(judge('build.dichotomy', float(len(failed)), 0.0, witness,
                         {str(n): float(n in failed) for n in range(1, depth + 1)}))
        logging.info(f'width-0 build of depth {depth}: {report.verdict}')
        return cover, report

    def __build_width0(self,
                       space: FiniteMetricSpace,
                       lam: float,
                       depth: int,
                       closed: bool) -> tuple[CoverSequence, list[tuple[int, int, float] | None]]:
        self.__check_scales(space, lam, depth)
        cap = self.__verification_settings.doubling_cap.get()
        probe = doubling_probe(space, 0.5,
                               self.__verification_settings.doubling_samples.get(),
                               self.__run_settings.seed.get())
        if probe.count > cap:
            raise DoublingUnbounded(probe.count, cap)

        def build_level(n: int) -> tuple[list[np.ndarray], tuple[int, int, float] | None]:
            net = maximal_separated_net(space, lam ** -n)
            colored = adjust_radii(space, color_separated_set(space, net), closed)
            logging.debug(f'level {n}: {len(net)} centers in {colored.color_count} colors')
            return colored.balls(space), dichotomy_violation(space, colored)

        with timed(f'width-0 build of depth {depth}'):
            built = parallel_map(build_level, range(1, depth + 1), self.__run_settings.threads.get())
        levels = [balls for balls, _ in built]
        self.__log_levels(levels)
        return CoverSequence(space, [[space.points], *levels], 0, lam), [violation for _, violation in built]

    def __check_scales(self, space: FiniteMetricSpace, lam: float, depth: int):
        if lam <= 1:
            raise BuildError(f'visual parameter must exceed 1, got {lam}')
        if depth < 0:
            raise BuildError(f'depth must be non-negative, got {depth}')
        resolution = space.min_separation()
        for n in range(1, depth + 1):
            if lam ** -n < 2 * resolution:
                raise ResolutionExceeded(n, lam ** -n, resolution)
        if space.n >= 2 and depth > 0:
            perfectness = uniform_perfectness_probe(space,
                                                    self.__verification_settings.up_radius_ratio.get(),
                                                    self.__verification_settings.up_resolution_factor.get())
            logging.info(f'uniform perfectness {perfectness.constant:.3f} certified on radii '
                         f'[{perfectness.r_min:.3g}, {perfectness.r_max:.3g}]')
            if perfectness.constant <= 0:
                logging.warning('sample is not uniformly perfect at its own resolution; tiles may degenerate')

    @staticmethod
    def __log_levels(levels: list[list[np.ndarray]]):
        for n, family in enumerate(levels, start=1):
            logging.info(f'level {n}: {len(family)} tiles')
