import math
from typing import override

from PySide6.QtCore import QSettings

from qvista.util.injector import component
from qvista.util.properties import Settings, FloatProperty, IntProperty


@component()
class VerificationSettings(Settings):
    threshold = FloatProperty(64.0, minimum=0.0)
    combinatorial_threshold = FloatProperty(4.0, minimum=0.0)
    shrink_target = FloatProperty(0.95, minimum=0.0)
    exact_vertex_cap = IntProperty(400, minimum=1)
    sampled_triples = IntProperty(200_000, minimum=1)
    nu_step = FloatProperty(0.05, minimum=0.001)
    distortion_cap = FloatProperty(1e6, minimum=1.0)
    knee_factor = FloatProperty(1.5, minimum=1.0)
    snowflake_log_threshold = FloatProperty(math.log(64.0), minimum=0.0)
    qs_max_points = IntProperty(256, minimum=3)
    up_radius_ratio = FloatProperty(1.1, minimum=1.0001)
    up_resolution_factor = FloatProperty(10.0, minimum=1.0)
    doubling_cap = IntProperty(5, minimum=1)
    doubling_samples = IntProperty(256, minimum=1)

    def __init__(self, settings: QSettings):
        super().__init__(settings)

    @property
    @override
    def group(self) -> str:
        return 'verification'

    def nu_grid(self) -> list[float]:
        step = self.nu_step.get()
        count = max(int(round(1.0 / step)), 1)
        return [round(step * (i + 1), 10) for i in range(count)]
