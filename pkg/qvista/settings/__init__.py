from PySide6.QtCore import QSettings

from qvista.util.injector import component
from .julia import JuliaSettings
from .run import RunSettings
from .verification import VerificationSettings


@component()
def __qsettings() -> QSettings:
    return QSettings(QSettings.Format.IniFormat, QSettings.Scope.UserScope, 'qvista', 'qvista')
