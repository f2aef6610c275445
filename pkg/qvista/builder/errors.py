class BuildError(Exception):
    pass


class ResolutionExceeded(BuildError):
    def __init__(self, level: int, scale: float, resolution: float):
        super().__init__(f'level {level} scale {scale:.3g} is below twice the sample resolution {resolution:.3g}')
        self.level = level
        self.scale = scale
        self.resolution = resolution


class DoublingUnbounded(BuildError):
    def __init__(self, count: int, cap: int):
        super().__init__(f'doubling probe found {count} separated points, above the cap {cap}')
        self.count = count
        self.cap = cap


class UnknownFixture(BuildError):
    pass
