class TileGraphError(Exception):
    pass


class UnknownVertex(TileGraphError):
    pass


class TripleBudgetExceeded(TileGraphError):
    def __init__(self, vertices: int, cap: int):
        super().__init__(f'exact triple scan over {vertices} vertices exceeds the cap of {cap}; use sampled mode')
        self.vertices = vertices
        self.cap = cap
