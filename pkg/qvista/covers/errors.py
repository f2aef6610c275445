class CoverError(Exception):
    pass


class NotACover(CoverError):
    def __init__(self, level: int, missing: int):
        super().__init__(f'level {level} does not cover point {missing}')
        self.level = level
        self.witness = missing


class RootLevelError(CoverError):
    pass


class EmptyTile(CoverError):
    def __init__(self, level: int, index: int):
        super().__init__(f'tile {level}:{index} has no members')
        self.witness = (level, index)


class UnknownTile(CoverError):
    pass


class MissingLambda(CoverError):
    pass


class FitFailure(CoverError):
    pass
