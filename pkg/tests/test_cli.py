import json

import pytest

from qvista.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def run(settings_path, monkeypatch):
    monkeypatch.delenv('QVISTA_SEED', raising=False)

    def invoke(*argv: str) -> int:
        return main(['--settings', str(settings_path), *argv])

    return invoke


@pytest.fixture
def cantor_files(run, tmp_path):
    space, cover = tmp_path / 'space.json', tmp_path / 'cover.json'
    assert run('fixture', 'cantor', '--depth', '3', '--out-space', str(space), '--out-cover', str(cover)) == EXIT_OK
    return space, cover


@pytest.fixture
def interleaved(run, tmp_path):
    space, cover = tmp_path / 'space.json', tmp_path / 'cover.json'
    assert run('fixture', 'dyadic_interleaved', '--depth', '7',
               '--out-space', str(space), '--out-cover', str(cover)) == EXIT_OK
    return space, cover


def _load(path) -> dict:
    return json.loads(path.read_text(encoding='utf-8'))


def test_fixture_writes_files(cantor_files):
    space, cover = cantor_files
    assert _load(space)['n'] == 16
    assert len(_load(space)['dist']) == 16
    assert _load(cover)['lambda'] == 3.0


def test_fixture_accepts_older_flags(run, tmp_path):
    space, cover = tmp_path / 'tree.json', tmp_path / 'tree-cover.json'
    assert run('fixture', 'tree_example_3_7', '--depth', '3',
               '--space-out', str(space), '--cover-out', str(cover)) == EXIT_OK
    assert _load(space)['n'] == 24


def test_build_writes_cover_and_report(run, tmp_path, cantor_files):
    space, _ = cantor_files
    cover, report = tmp_path / 'built.json', tmp_path / 'build-report.json'
    assert run('build', '--space', str(space), '--lambda', '3', '--width', '0', '--depth', '2',
               '--out', str(cover), '--report', str(report)) == EXIT_OK
    assert _load(cover)['width'] == 0
    records = {it['condition']: it for it in _load(report)['records']}
    assert records['build.dichotomy']['verdict'] == 'PASS'


def test_verify_failure_exit_code(run, interleaved, tmp_path):
    space, cover = interleaved
    out = tmp_path / 'report.json'
    code = run('verify', '--space', str(space), '--cover', str(cover), '--mode', 'quasi',
               '--thresholds', '{"conditions": {"qv.iii": 4}}', '--out', str(out))
    assert code == EXIT_FAIL
    report = _load(out)
    assert report['verdict'] == 'FAIL'
    consecutive = next(it for it in report['records'] if it['condition'] == 'qv.iii')
    assert consecutive['verdict'] == 'FAIL'
    assert consecutive['witness']['tiles']
    assert report['manifest']['command'] == 'verify'
    assert report['manifest']['parameters']['kind'] == 'quasi-visual'


def test_visual_needs_lambda(run, interleaved):
    space, cover = interleaved
    assert run('verify', '--mode', 'visual', '--space', str(space), '--cover', str(cover)) == EXIT_USAGE
    assert run('verify', '--kind', 'visual', '--space', str(space), '--cover', str(cover)) == EXIT_USAGE


def test_proximity_needs_only_the_cover(run, cantor_files, tmp_path):
    _, cover = cantor_files
    table, report = tmp_path / 'm.json', tmp_path / 'report.json'
    assert run('proximity', '--cover', str(cover), '--out', str(table), '--report', str(report)) == EXIT_OK
    assert _load(table)
    records = {it['condition']: it for it in _load(report)['records']}
    assert records['proximity.infimum_gap']['verdict'] == 'PASS'
    assert list(_load(report)['manifest']['inputs']) == ['cover']


def test_synthesize_writes_metric(run, cantor_files, tmp_path):
    _, cover = cantor_files
    metric = tmp_path / 'metric.json'
    assert run('synthesize', '--cover', str(cover), '--lambda', '3', '--out', str(metric),
               '--report', str(tmp_path / 'report.json')) == EXIT_OK
    assert _load(metric)['n'] == 16


def test_qscheck_names(run, cantor_files, tmp_path):
    space, _ = cantor_files
    out = tmp_path / 'report.json'
    assert run('qscheck', '--d1', str(space), '--d2', str(space), '--out', str(out)) == EXIT_OK
    inputs = _load(out)['manifest']['inputs']
    assert inputs['space'] == inputs['other']


def test_usage_errors(run, tmp_path):
    assert run('verify', '--bogus') == EXIT_USAGE
    assert run('fixture', 'mandelbrot', '--depth', '2', '--out-space', 'a', '--out-cover', 'b') == EXIT_USAGE
    missing = str(tmp_path / 'missing.json')
    assert run('verify', '--space', missing, '--cover', missing) == EXIT_USAGE


def test_runs_are_reproducible(run, tmp_path, cantor_files):
    space, cover = cantor_files
    outputs = []
    for name in ('first.json', 'second.json'):
        out = tmp_path / name
        assert run('--seed', '5', 'tilegraph', '--space', str(space), '--cover', str(cover),
                   '--hyperbolicity', 'sampled', '-o', str(out)) == EXIT_OK
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0])['manifest']['seed'] == 5


def test_text_format(run, cantor_files, capsysbinary):
    space, cover = cantor_files
    capsysbinary.readouterr()
    assert run('--format', 'text', 'proximity', '--space', str(space), '--cover', str(cover)) == EXIT_OK
    assert capsysbinary.readouterr().out.startswith(b'combinatorially-visual: PASS')
