class BoundaryError(Exception):
    pass


class CoverGap(BoundaryError):
    def __init__(self, level: int, point: int):
        super().__init__(f'no tile of level {level} contains point {point}')
        self.witness = (level, point)


class RayViolation(BoundaryError):
    def __init__(self, point: int, first: int, second: int, distance: int):
        super().__init__(f'geodesic of point {point}: levels {first} and {second} are {distance} apart')
        self.witness = (point, first, second)
