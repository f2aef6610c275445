from typing import override

from PySide6.QtCore import QSettings

from qvista.util.injector import component
from qvista.util.properties import Settings, FloatProperty, IntProperty


@component()
class JuliaSettings(Settings):
    grid_size = IntProperty(2048, minimum=16)
    max_grid_size = IntProperty(8192, minimum=16)
    root_tolerance = FloatProperty(1e-7, minimum=0.0)
    target_samples = IntProperty(1024, minimum=1)
    lifting_steps = IntProperty(256, minimum=8)

    def __init__(self, settings: QSettings):
        super().__init__(settings)

    @property
    @override
    def group(self) -> str:
        return 'julia'
