from enum import Enum
from typing import Self, Type


class EnhancedEnum(Enum):
    __cached_values = None

    @classmethod
    def values(cls: Type[Self]) -> tuple[Self, ...]:
        if cls.__dict__.get('_EnhancedEnum__cached_values') is None:
            cls.__cached_values = tuple(cls)
        return cls.__cached_values

    @classmethod
    def names(cls) -> list[str]:
        return [str(it.value) for it in cls.values()]

    @classmethod
    def parse(cls, text: str) -> Self:
        for value in cls.values():
            if str(value.value) == text:
                return value
        raise ValueError(f'{text!r} is not one of {", ".join(cls.names())}')
