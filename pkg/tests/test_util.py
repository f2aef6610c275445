import pytest
from PySide6.QtCore import QSettings

from qvista.covers import CoverVerifier
from qvista.io import ReportFormat
from qvista.settings import RunSettings, VerificationSettings
from qvista.util.clock import Clock, timed
from qvista.util.injector import ComponentError, component
from qvista.util.injector.app_context import AppContext
from qvista.util.injector.provider import InstanceProvider
from qvista.util.parallel import parallel_map, worker_count
from qvista.util.properties import FloatProperty, IntProperty


class TestEnhancedEnum:
    def test_parse(self):
        assert ReportFormat.parse('text') == ReportFormat.TEXT

    def test_parse_unknown(self):
        with pytest.raises(ValueError, match='json, text'):
            ReportFormat.parse('yaml')

    def test_names(self):
        assert ReportFormat.names() == ['json', 'text']


class TestProperty:
    def test_coerces_value(self):
        prop = FloatProperty(1.0)
        prop.set(3)
        assert prop.get() == 3.0
        assert isinstance(prop.get(), float)

    def test_minimum(self):
        prop = IntProperty(5, minimum=1)
        with pytest.raises(ValueError):
            prop.set(0)

    def test_change_listener(self):
        prop = IntProperty(1)
        events = []
        prop.on_change(events.append)
        prop.set(1)
        prop.set(2)
        assert [(it.old_value, it.new_value) for it in events] == [(1, 2)]

    def test_override_is_transient(self):
        prop = IntProperty(1)
        prop.override(4)
        assert prop.transient
        prop.reset()
        assert not prop.transient
        assert prop.get() == 1


class TestSettings:
    def test_defaults(self, verification_settings):
        assert verification_settings.threshold.get() == 64.0
        assert verification_settings.shrink_target.get() == 0.95

    def test_instances_do_not_share_properties(self, qsettings):
        first = VerificationSettings(qsettings)
        second = VerificationSettings(qsettings)
        first.threshold.set(10.0)
        assert second.threshold.get() == 64.0

    def test_persists_on_close(self, verification_settings, settings_path):
        verification_settings.threshold.set(12.5)
        verification_settings._on_close()
        reloaded = VerificationSettings(QSettings(str(settings_path), QSettings.Format.IniFormat))
        assert reloaded.threshold.get() == 12.5

    def test_overrides_are_not_persisted(self, verification_settings, settings_path):
        verification_settings.apply_overrides({'threshold': 3.0, 'nu_step': None})
        assert verification_settings.threshold.get() == 3.0
        verification_settings._on_close()
        reloaded = VerificationSettings(QSettings(str(settings_path), QSettings.Format.IniFormat))
        assert reloaded.threshold.get() == 64.0

    def test_unknown_override(self, verification_settings):
        with pytest.raises(KeyError):
            verification_settings.apply_overrides({'colour': 1})

    def test_to_dict_and_reset(self, verification_settings):
        verification_settings.doubling_cap.set(9)
        assert verification_settings.to_dict()['doubling_cap'] == 9
        verification_settings.reset()
        assert verification_settings.doubling_cap.get() == 5

    def test_nu_grid(self, verification_settings):
        grid = verification_settings.nu_grid()
        assert len(grid) == 20
        assert grid[0] == 0.05
        assert grid[-1] == 1.0

    def test_seed_from_environment(self, qsettings, monkeypatch):
        monkeypatch.setenv('QVISTA_SEED', '17')
        assert RunSettings(qsettings).seed.get() == 17

    def test_bad_seed_from_environment(self, qsettings, monkeypatch):
        monkeypatch.setenv('QVISTA_SEED', 'seventeen')
        assert RunSettings(qsettings).seed.get() == 0


class TestAppContext:
    @pytest.fixture
    def context(self, qsettings):
        return AppContext(['qvista'], provided={QSettings: InstanceProvider(qsettings)})

    def test_resolves_singletons(self, context):
        verifier = context.get_component(CoverVerifier)
        assert verifier is context.get_component(CoverVerifier)

    def test_settings_share_provided_qsettings(self, context, qsettings):
        assert context.get_component(VerificationSettings).settings is qsettings

    def test_unknown_component(self, context):
        with pytest.raises(ComponentError):
            context.get_component(Clock)

    def test_factory_needs_return_annotation(self):
        with pytest.raises(ComponentError):
            component()(lambda: 1)


class TestParallel:
    def test_worker_count(self):
        assert worker_count(3) == 3
        assert worker_count(0) >= 1

    @pytest.mark.parametrize('threads', [1, 4])
    def test_preserves_order(self, threads):
        assert parallel_map(lambda it: it * it, range(10), threads) == [it * it for it in range(10)]


def test_timed_yields_clock():
    with timed('nothing') as clock:
        pass
    assert clock.since_start() >= 0


def test_clock_laps():
    clock = Clock()
    first = clock.lap('build')
    clock.lap('build')
    assert first >= 0
    assert list(clock.laps) == ['build']
    assert clock.laps['build'] <= clock.since_start()
