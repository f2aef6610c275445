import hashlib
import json

import numpy as np
import pytest

from qvista.app_version import get_version
from qvista.covers import VerificationReport, judge
from qvista.io import (CoverFile, FormatError, ReportFormat, RunManifest, SpaceFile, canonical, load_cover,
                       load_model, load_space, load_thresholds, parse, render, save_model)


class TestRender:
    def test_empty(self):
        assert render(None) == b'{}\n'
        assert render({}, ReportFormat.JSON) == b'{}\n'
        assert render({}, ReportFormat.TEXT) == b''

    def test_sorted_and_indented(self):
        data = render({'b': 1, 'a': [0.1 + 0.2]})
        assert data == b'{\n  "a": [\n    0.3\n  ],\n  "b": 1\n}\n'

    def test_report(self):
        report = VerificationReport('verify', 3, 0)
        report.add(judge('qv.i', 2.0, 64.0, None))
        report.derived['k0'] = np.int64(1)
        payload = parse(render(report))
        assert payload['verdict'] == 'PASS'
        assert payload['records'][0]['condition'] == 'qv.i'
        assert payload['derived'] == {'k0': 1}
        assert render(report) == render(report.to_dict())

    def test_text(self):
        report = VerificationReport('verify', 3, 1)
        report.add(judge('qv.iii', 8.0, 4.0, {'tiles': [[6, 0], [7, 1]]}))
        text = render(report, ReportFormat.TEXT).decode()
        assert text.startswith('verify: FAIL (depth 3, width 1)')
        assert 'qv.iii' in text
        assert 'FAIL' in text.splitlines()[-1]


class TestCanonical:
    def test_values(self):
        assert canonical({1: (np.float64(1 / 3), np.bool_(True))}) == {'1': [0.333333333333333, True]}
        assert canonical([float('inf'), float('nan')]) == ['inf', 'nan']
        assert canonical(np.arange(3)) == [0, 1, 2]


class TestSpaceFile:
    def test_needs_a_source(self):
        with pytest.raises(ValueError):
            SpaceFile()

    def test_extra_keys(self):
        with pytest.raises(ValueError):
            SpaceFile(dist=[[0.0]], points=[])

    def test_from_coords(self):
        space = SpaceFile(coords=[[0.0], [3.0]], labels=['a', 'b']).to_space()
        assert space.dist[0, 1] == 3.0
        assert space.labels == ('a', 'b')

    def test_malformed(self):
        with pytest.raises(FormatError):
            SpaceFile(dist=[[0.0, 1.0]]).to_space()

    def test_files(self, tmp_path, dyadic_cover):
        space_path, cover_path = tmp_path / 'space.json', tmp_path / 'cover.json'
        save_model(space_path, SpaceFile.from_space(dyadic_cover.space))
        save_model(cover_path, CoverFile.from_cover(dyadic_cover))
        space = load_space(space_path)
        assert np.allclose(space.dist, dyadic_cover.space.dist)
        cover = load_cover(cover_path, space)
        assert cover.member_lists() == dyadic_cover.member_lists()
        assert cover.visual_parameter == 2.0

    def test_point_count(self, tmp_path):
        path = tmp_path / 'space.json'
        path.write_text('{"n": 2, "dist": [[0, 1], [1, 0]], "labels": ["a", "b"]}', encoding='utf-8')
        assert load_space(path).n == 2
        path.write_text('{"n": 3, "dist": [[0, 1], [1, 0]]}', encoding='utf-8')
        with pytest.raises(FormatError):
            load_space(path)

    def test_writes_point_count(self, tmp_path, dyadic_cover):
        path = tmp_path / 'space.json'
        save_model(path, SpaceFile.from_space(dyadic_cover.space))
        assert json.loads(path.read_text(encoding='utf-8'))['n'] == 33

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'space.json'
        path.write_text('{"dist": "nope"}', encoding='utf-8')
        with pytest.raises(FormatError):
            load_model(path, SpaceFile)


class TestCoverFile:
    def test_lambda_alias(self, tmp_path, cantor_cover):
        path = tmp_path / 'cover.json'
        save_model(path, CoverFile.from_cover(cantor_cover, np.zeros(16, dtype=int)))
        stored = json.loads(path.read_text(encoding='utf-8'))
        assert stored['lambda'] == 3.0
        assert 'visual_parameter' not in stored
        assert stored['sample_map'] == [0] * 16

    def test_omits_missing_lambda(self, tmp_path, cantor_cover):
        path = tmp_path / 'cover.json'
        save_model(path, CoverFile.from_cover(cantor_cover.with_visual_parameter(None)))
        assert 'lambda' not in json.loads(path.read_text(encoding='utf-8'))

    def test_lambda_must_exceed_one(self):
        with pytest.raises(ValueError):
            CoverFile(levels=[[[0]]], **{'lambda': 1.0})

    def test_invalid_cover(self, cantor_cover):
        with pytest.raises(FormatError):
            CoverFile(levels=[[[0, 1]]]).to_cover(cantor_cover.space)


class TestThresholds:
    def test_default(self):
        assert load_thresholds(None).conditions == {}

    def test_inline(self):
        thresholds = load_thresholds('{"default": 10, "conditions": {"qv.iii": 4}}')
        assert thresholds.threshold('qv.iii', 64) == 4
        assert thresholds.threshold('qv.i', 64) == 10

    def test_file(self, tmp_path):
        path = tmp_path / 'thresholds.json'
        path.write_text('{"conditions": {"cv.i": 2}}', encoding='utf-8')
        assert load_thresholds(str(path)).threshold('cv.i', 64) == 2

    def test_invalid(self):
        with pytest.raises(FormatError):
            load_thresholds('{"limit": 3}')


class TestRunManifest:
    def test_create(self, tmp_path):
        path = tmp_path / 'space.json'
        path.write_bytes(b'{"dist": [[0.0]]}\n')
        manifest = RunManifest.create('verify', {'space': path, 'cover': None}, 7, width=None, kind='visual')
        assert manifest.inputs == {'space': hashlib.sha256(b'{"dist": [[0.0]]}\n').hexdigest()}
        assert manifest.parameters == {'kind': 'visual'}
        assert manifest.seed == 7
        assert manifest.version == get_version()
