class JuliaError(Exception):
    pass


class MapSyntaxError(JuliaError):
    def __init__(self, text: str, position: int, message: str):
        super().__init__(f'{message} at position {position} in {text!r}')
        self.text = text
        self.position = position


class DegreeTooLow(JuliaError):
    def __init__(self, degree: int):
        super().__init__(f'rational map must have degree at least 2, got {degree}')
        self.degree = degree


class CommonRoots(JuliaError):
    def __init__(self, root: complex):
        super().__init__(f'numerator and denominator share the root {root:.6g}')
        self.witness = root


class SeedNotRepelling(JuliaError):
    def __init__(self, point: complex, multiplier: float):
        super().__init__(f'seed {point:.6g} is not a repelling fixed point (|g\'| = {multiplier:.4g})')
        self.witness = point
        self.multiplier = multiplier


class RootFindFailure(JuliaError):
    pass


class ResolutionInsufficient(JuliaError):
    def __init__(self, level: int, grid_size: int, reason: str):
        super().__init__(f'level {level} on a {grid_size}x{grid_size} grid: {reason}')
        self.level = level
        self.grid_size = grid_size


class EmptyLevel(JuliaError):
    def __init__(self, level: int):
        super().__init__(f'no region of level {level} meets the sample')
        self.level = level
