import pytest
from PySide6.QtCore import QSettings

from qvista.boundary import BoundaryService
from qvista.builder import CoverBuilder, branching_tree, cantor, interval_dyadic
from qvista.covers import CoverVerifier
from qvista.julia import JuliaService
from qvista.proximity import ProximityService
from qvista.settings import JuliaSettings, RunSettings, VerificationSettings
from qvista.tile_graph import TileGraphService


@pytest.fixture
def settings_path(tmp_path):
    return tmp_path / 'qvista.ini'


@pytest.fixture
def qsettings(settings_path):
    return QSettings(str(settings_path), QSettings.Format.IniFormat)


@pytest.fixture
def verification_settings(qsettings):
    return VerificationSettings(qsettings)


@pytest.fixture
def run_settings(qsettings, monkeypatch):
    monkeypatch.delenv('QVISTA_SEED', raising=False)
    return RunSettings(qsettings)


@pytest.fixture
def julia_settings(qsettings):
    return JuliaSettings(qsettings)


@pytest.fixture
def verifier(verification_settings):
    return CoverVerifier(verification_settings)


@pytest.fixture
def builder(verification_settings, run_settings):
    return CoverBuilder(verification_settings, run_settings)


@pytest.fixture
def proximity_service(verifier, verification_settings, run_settings):
    return ProximityService(verifier, verification_settings, run_settings)


@pytest.fixture
def tile_graph_service(proximity_service, verification_settings, run_settings):
    return TileGraphService(proximity_service, verification_settings, run_settings)


@pytest.fixture
def boundary_service(proximity_service, verification_settings):
    return BoundaryService(proximity_service, verification_settings)


@pytest.fixture
def julia_service(verifier, proximity_service, julia_settings, run_settings):
    return JuliaService(verifier, proximity_service, julia_settings, run_settings)


@pytest.fixture
def cantor_cover():
    _, cover = cantor(3)
    return cover


@pytest.fixture
def tree_cover():
    _, cover = branching_tree(3)
    return cover


@pytest.fixture
def dyadic_cover():
    _, cover = interval_dyadic(3)
    return cover
