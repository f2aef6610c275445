class MetricError(Exception):
    pass


class NonSymmetric(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f'dist[{i}][{j}] != dist[{j}][{i}]')
        self.witness = (i, j)


class ZeroOffDiagonal(MetricError):
    def __init__(self, i: int, j: int):
        super().__init__(f'dist[{i}][{j}] is not positive')
        self.witness = (i, j)


class NonZeroDiagonal(MetricError):
    def __init__(self, i: int):
        super().__init__(f'dist[{i}][{i}] is not zero')
        self.witness = (i,)


class TriangleViolation(MetricError):
    def __init__(self, i: int, j: int, k: int):
        super().__init__(f'dist[{i}][{j}] > dist[{i}][{k}] + dist[{k}][{j}]')
        self.witness = (i, j, k)


class MalformedMatrix(MetricError):
    pass


class SphereError(MetricError):
    pass
