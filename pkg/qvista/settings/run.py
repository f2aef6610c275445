import logging
import os
from typing import override, Final

from PySide6.QtCore import QSettings

from qvista.util.injector import component
from qvista.util.properties import Settings, IntProperty, StrProperty

SEED_ENVIRONMENT: Final[str] = 'QVISTA_SEED'


@component()
class RunSettings(Settings):
    seed = IntProperty(0)
    threads = IntProperty(0, minimum=0)
    report_format = StrProperty('json')

    def __init__(self, settings: QSettings):
        super().__init__(settings)
        from_environment = os.environ.get(SEED_ENVIRONMENT)
        if from_environment is not None:
            try:
                self.seed.override(int(from_environment))
            except ValueError:
                logging.warning(f'ignoring {SEED_ENVIRONMENT}={from_environment!r}: not an integer')

    @property
    @override
    def group(self) -> str:
        return 'run'
