class ProximityError(Exception):
    pass


class LambdaTooLarge(ProximityError):
    def __init__(self, lam: float, c_cv: float):
        super().__init__(f'lambda^C = {lam}^{c_cv} exceeds 2; choose a smaller lambda')
        self.lam = lam
        self.c_cv = c_cv


class KTooLarge(ProximityError):
    def __init__(self, k: float):
        super().__init__(f'quasi-metric constant {k} exceeds 2')
        self.k = k


class QuasiMetricViolation(ProximityError):
    def __init__(self, message: str, witness: tuple[int, ...]):
        super().__init__(message)
        self.witness = witness


class SandwichViolation(ProximityError):
    def __init__(self, i: int, j: int, value: float, low: float, high: float):
        super().__init__(f'metrized distance {value} of ({i}, {j}) outside [{low}, {high}]')
        self.witness = (i, j)


class MapNotClosed(ProximityError):
    def __init__(self, point: int, image: int):
        super().__init__(f'point {point} maps to {image}, outside the sample')
        self.witness = (point, image)
