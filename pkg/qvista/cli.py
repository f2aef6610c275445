import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Final, Sequence

import numpy as np
from PySide6.QtCore import QSettings

from qvista.boundary import BoundaryService, RegularityCheck
from qvista.builder import BuildError, CoverBuilder, FixtureName, fixture
from qvista.covers import ConditionRecord, CoverError, CoverSequence, CoverVerifier, VerificationReport, Verdict
from qvista.io import CoverFile, FormatError, ReportFormat, RunManifest, SpaceFile, load_cover, load_model, \
    load_space, load_thresholds, render, save_model
from qvista.julia import JuliaError, JuliaService, RationalMap
from qvista.metric import MetricError
from qvista.proximity import ProximityError, ProximityService, compute_proximity
from qvista.settings import RunSettings, VerificationSettings
from qvista.tile_graph import ScanMode, TileGraphError, TileGraphService
from qvista.util.injector import component
from qvista.util.injector.app_context import AppContext
from qvista.util.injector.provider import InstanceProvider

EXIT_OK: Final = 0
EXIT_FAIL: Final = 1
EXIT_USAGE: Final = 2

DOMAIN_ERRORS: Final = (MetricError, CoverError, BuildError, ProximityError, TileGraphError, JuliaError)


def _write(path: str | None, data: bytes):
    if path is None or path == '-':
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _write_json(path: str, payload: dict[str, Any]):
    Path(path).write_text(json.dumps(payload, sort_keys=True) + '\n', encoding='utf-8')


@component()
class Commands:
    def __init__(self,
                 builder: CoverBuilder,
                 verifier: CoverVerifier,
                 proximity_service: ProximityService,
                 tile_graph_service: TileGraphService,
                 boundary_service: BoundaryService,
                 julia_service: JuliaService,
                 run_settings: RunSettings,
                 verification_settings: VerificationSettings):
        self.__builder: Final = builder
        self.__verifier: Final = verifier
        self.__proximity: Final = proximity_service
        self.__tile_graph: Final = tile_graph_service
        self.__boundary: Final = boundary_service
        self.__julia: Final = julia_service
        self.__run_settings: Final = run_settings
        self.__verification_settings: Final = verification_settings

    def handler(self, name: str) -> Callable[[argparse.Namespace], int]:
        return getattr(self, name)

    def __emit(self, args: argparse.Namespace, report: VerificationReport, manifest: RunManifest) -> int:
        payload = report.to_dict()
        payload['manifest'] = manifest.model_dump()
        fmt = ReportFormat.parse(args.format or self.__run_settings.report_format.get())
        _write(getattr(args, 'report', None), render(payload, fmt))
        return EXIT_OK if report.verdict != Verdict.FAIL else EXIT_FAIL

    def __manifest(self, command: str, inputs: dict[str, str | None], **parameters) -> RunManifest:
        return RunManifest.create(command, inputs, self.__run_settings.seed.get(), **parameters)

    @staticmethod
    def __load_cover(args: argparse.Namespace) -> tuple[CoverSequence, CoverFile]:
        cover_file = load_model(args.cover, CoverFile)
        space = load_space(args.space) if args.space else cover_file.discrete_space()
        return cover_file.to_cover(space), cover_file

    def build(self, args: argparse.Namespace) -> int:
        space = load_space(args.space)
        cover, report = self.__builder.build(space, args.lam, args.depth, args.width, args.closed)
        save_model(args.out, CoverFile.from_cover(cover))
        logging.info(f'wrote cover of depth {cover.depth} to {args.out}')
        manifest = self.__manifest('build', {'space': args.space}, lam=args.lam, depth=args.depth,
                                   width=args.width, closed=args.closed)
        return self.__emit(args, report, manifest)

    def verify(self, args: argparse.Namespace) -> int:
        space = load_space(args.space)
        cover = load_cover(args.cover, space)
        if args.lam is not None:
            cover = cover.with_visual_parameter(args.lam)
        thresholds = load_thresholds(args.thresholds)
        kind = 'quasi-visual' if args.kind == 'quasi' else args.kind
        report = VerificationReport('verify', cover.depth, cover.width if args.width is None else args.width)
        if kind in ('visual', 'both'):
            report.extend(self.__verifier.verify_visual(cover, thresholds, args.width))
        if kind in ('quasi-visual', 'both'):
            report.extend(self.__verifier.verify_quasi_visual(cover, thresholds, args.width))
        if args.quasiball:
            for record in self.__verifier.quasiball_records(cover, thresholds):
                report.add(record)
        manifest = self.__manifest('verify', {'space': args.space, 'cover': args.cover},
                                   kind=kind, width=args.width, lam=args.lam, thresholds=args.thresholds)
        return self.__emit(args, report, manifest)

    def proximity(self, args: argparse.Namespace) -> int:
        cover, cover_file = self.__load_cover(args)
        table = compute_proximity(cover, args.width)
        if args.table:
            _write_json(args.table, table.to_dict())
        thresholds = load_thresholds(args.thresholds)
        report = self.__proximity.check_combinatorially_visual(cover, table, thresholds)
        if cover_file.sample_map is not None:
            report.extend(self.__proximity.dynamical_checks(cover, np.asarray(cover_file.sample_map), table,
                                                            thresholds=thresholds))
        manifest = self.__manifest('proximity', {'space': args.space, 'cover': args.cover},
                                   width=table.width, thresholds=args.thresholds)
        return self.__emit(args, report, manifest)

    def synthesize(self, args: argparse.Namespace) -> int:
        cover, _ = self.__load_cover(args)
        thresholds = load_thresholds(args.thresholds)
        synthesized, report = self.__proximity.synthesize_visual_metric(cover, args.lam, thresholds)
        if args.metric_out:
            save_model(args.metric_out, SpaceFile.from_space(synthesized))
        manifest = self.__manifest('synthesize', {'space': args.space, 'cover': args.cover}, lam=args.lam)
        return self.__emit(args, report, manifest)

    def qscheck(self, args: argparse.Namespace) -> int:
        first, second = load_space(args.space), load_space(args.other)
        fit = self.__proximity.fit_power_quasisymmetry(first, second)
        report = VerificationReport('quasisymmetry', 0, 0)
        witness = None if fit.distortion is None else {'k': fit.distortion.k, 'nu': fit.distortion.nu}
        report.add(ConditionRecord('qs.power', fit.distortion.k if fit.distortion else math.inf,
                                   self.__verification_settings.distortion_cap.get(), fit.verdict, witness))
        report.derived['k_by_nu'] = {f'{nu:.2f}': k for nu, k in fit.k_by_nu.items()}
        if args.snowflake:
            snowflake = self.__proximity.snowflake_check(first, second)
            report.add(ConditionRecord('qs.snowflake', snowflake.log_residual,
                                       self.__verification_settings.snowflake_log_threshold.get(),
                                       snowflake.verdict, {'alpha': snowflake.alpha, 'c': snowflake.c}))
        manifest = self.__manifest('qscheck', {'space': args.space, 'other': args.other}, snowflake=args.snowflake)
        return self.__emit(args, report, manifest)

    def tilegraph(self, args: argparse.Namespace) -> int:
        cover, _ = self.__load_cover(args)
        graph, report = self.__tile_graph.analyze(cover, ScanMode.parse(args.hyperbolicity), args.cluster_r,
                                                  thresholds=load_thresholds(args.thresholds))
        if args.graph:
            _write_json(args.graph, graph.to_json_dict())
        manifest = self.__manifest('tilegraph', {'space': args.space, 'cover': args.cover},
                                   hyperbolicity=args.hyperbolicity, cluster_r=args.cluster_r)
        return self.__emit(args, report, manifest)

    def boundary(self, args: argparse.Namespace) -> int:
        space = load_space(args.space)
        cover = load_cover(args.cover, space)
        boundary, report = self.__boundary.analyze(cover, args.lam, RegularityCheck.parse(args.check),
                                                   thresholds=load_thresholds(args.thresholds))
        if args.metric_out:
            _write_json(args.metric_out, {'dist': boundary.dist.tolist(), 'lambda': boundary.lam,
                                          'depth': boundary.depth})
        manifest = self.__manifest('boundary', {'space': args.space, 'cover': args.cover},
                                   lam=args.lam, check=args.check)
        return self.__emit(args, report, manifest)

    def julia(self, args: argparse.Namespace) -> int:
        g = RationalMap.parse(args.map)
        built, report = self.__julia.run(g, args.depth, args.cover_radius, args.levels,
                                         load_thresholds(args.thresholds), args.grid)
        if args.space_out:
            save_model(args.space_out, SpaceFile.from_space(built.cover.space))
        if args.cover_out:
            save_model(args.cover_out, CoverFile.from_cover(built.cover, built.sample_map))
        manifest = self.__manifest('julia', {}, map=args.map, depth=args.depth, cover_radius=args.cover_radius,
                                   levels=args.levels, grid=built.pullback.grid.size)
        return self.__emit(args, report, manifest)

    def fixture(self, args: argparse.Namespace) -> int:
        space, cover = fixture(args.name, args.depth, resolution=args.resolution, width=args.width)
        save_model(args.space_out, SpaceFile.from_space(space))
        save_model(args.cover_out, CoverFile.from_cover(cover))
        logging.info(f'fixture {args.name}: {space.n} points, depth {cover.depth}')
        return EXIT_OK


def _common(parser: argparse.ArgumentParser,
            report_flags: tuple[str, ...] = ('-o', '--out', '--report'),
            thresholds: bool = True):
    if thresholds:
        parser.add_argument('--thresholds', help='per-condition thresholds as JSON or a JSON file')
    parser.add_argument(*report_flags, dest='report', help='report destination (default: standard output)')


def _space_and_cover(parser: argparse.ArgumentParser, space_required: bool = True):
    parser.add_argument('--space', required=space_required,
                        help=None if space_required else 'metric space (default: unit distances on the cover points)')
    parser.add_argument('--cover', required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qvista', description='Quasi-visual approximations of finite metric spaces')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('--threads', type=int, help='cap on worker threads (0 = one per CPU)')
    parser.add_argument('--seed', type=int, help='seed for every randomized step')
    parser.add_argument('--format', choices=ReportFormat.names(), help='report format')
    parser.add_argument('--settings', help='INI file to read settings from instead of the user settings')
    subparsers = parser.add_subparsers(required=True)

    subparser = subparsers.add_parser('build', help='Build a visual cover sequence')
    subparser.add_argument('--space', required=True)
    subparser.add_argument('--lambda', dest='lam', type=float, required=True)
    subparser.add_argument('--depth', type=int, required=True)
    subparser.add_argument('--width', type=int, choices=(0, 1), default=1)
    subparser.add_argument('--closed', action='store_true', help='use closed balls')
    subparser.add_argument('-o', '--out', required=True, help='where to write the cover')
    _common(subparser, ('--report',), thresholds=False)
    subparser.set_defaults(command='build')

    subparser = subparsers.add_parser('verify', help='Verify visual and quasi-visual conditions')
    _space_and_cover(subparser)
    subparser.add_argument('--mode', '--kind', dest='kind', choices=('visual', 'quasi', 'quasi-visual', 'both'),
                           default='quasi-visual')
    subparser.add_argument('--width', type=int)
    subparser.add_argument('--quasiball', action='store_true', help='also check the quasi-ball property')
    subparser.add_argument('--lambda', dest='lam', type=float)
    _common(subparser)
    subparser.set_defaults(command='verify')

    subparser = subparsers.add_parser('proximity', help='Compute proximity levels and combinatorial conditions')
    _space_and_cover(subparser, space_required=False)
    subparser.add_argument('--width', type=int)
    subparser.add_argument('-o', '--out', '--table', dest='table', help='where to write the proximity table')
    _common(subparser, ('--report',))
    subparser.set_defaults(command='proximity')

    subparser = subparsers.add_parser('synthesize', help='Synthesize a visual metric from proximity levels')
    _space_and_cover(subparser, space_required=False)
    subparser.add_argument('--lambda', dest='lam', type=float, required=True)
    subparser.add_argument('-o', '--out', '--metric-out', dest='metric_out', help='where to write the metric')
    _common(subparser, ('--report',))
    subparser.set_defaults(command='synthesize')

    subparser = subparsers.add_parser('qscheck', help='Fit a power quasisymmetry between two metrics')
    subparser.add_argument('--d1', '--space', dest='space', required=True)
    subparser.add_argument('--d2', '--other', dest='other', required=True)
    subparser.add_argument('--snowflake', action='store_true')
    _common(subparser)
    subparser.set_defaults(command='qscheck')

    subparser = subparsers.add_parser('tilegraph', help='Analyze the tile graph')
    _space_and_cover(subparser, space_required=False)
    subparser.add_argument('--hyperbolicity', choices=ScanMode.names(), default=ScanMode.EXACT.value)
    subparser.add_argument('--cluster-r', type=int)
    subparser.add_argument('--graph', help='where to write the graph adjacency')
    _common(subparser)
    subparser.set_defaults(command='tilegraph')

    subparser = subparsers.add_parser('boundary', help='Approximate the boundary metric')
    _space_and_cover(subparser)
    subparser.add_argument('--lambda', dest='lam', type=float)
    subparser.add_argument('--check', choices=RegularityCheck.names(), default=RegularityCheck.BOTH.value)
    subparser.add_argument('-o', '--out', '--metric-out', dest='metric_out', help='where to write the boundary metric')
    _common(subparser, ('--report',))
    subparser.set_defaults(command='boundary')

    subparser = subparsers.add_parser('julia', help='Build and verify a dynamical cover of a Julia set')
    subparser.add_argument('--map', required=True)
    subparser.add_argument('--depth', type=int, default=10)
    subparser.add_argument('--cover-radius', type=float, default=math.pi / 8)
    subparser.add_argument('--levels', type=int, default=6)
    subparser.add_argument('--grid', type=int)
    subparser.add_argument('--out-space', '--space-out', dest='space_out')
    subparser.add_argument('--out-cover', '--cover-out', dest='cover_out')
    _common(subparser)
    subparser.set_defaults(command='julia')

    subparser = subparsers.add_parser('fixture', help='Write a fixture space and cover')
    subparser.add_argument('name', choices=FixtureName.names())
    subparser.add_argument('--depth', type=int, required=True)
    subparser.add_argument('--resolution', type=int)
    subparser.add_argument('--width', type=int, default=0)
    subparser.add_argument('--out-space', '--space-out', dest='space_out', required=True)
    subparser.add_argument('--out-cover', '--cover-out', dest='cover_out', required=True)
    subparser.set_defaults(command='fixture')
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    provided = {}
    if args.settings:
        provided[QSettings] = InstanceProvider(QSettings(args.settings, QSettings.Format.IniFormat))

    try:
        context = AppContext(['qvista'], provided=provided)
        context.get_component(RunSettings).apply_overrides({'seed': args.seed, 'threads': args.threads})
        commands = context.get_component(Commands)
        return commands.handler(args.command)(args)
    except (FormatError, OSError, ValueError) as e:
        print(f'qvista: {e}', file=sys.stderr)
        return EXIT_USAGE
    except DOMAIN_ERRORS as e:
        print(f'qvista: {type(e).__name__}: {e}', file=sys.stderr)
        return EXIT_USAGE
