from abc import ABC, abstractmethod
from typing import Any, Callable, Final

from .lifecycle import register_close


class Provider(ABC):
    @abstractmethod
    def get(self) -> Any:
        ...


class SingletonProvider(Provider):
    def __init__(self, factory: Callable[..., Any], dependencies: list[Provider]):
        self.__factory: Final = factory
        self.__dependencies: Final = dependencies
        self.__instance: Any = None
        self.__created = False

    def get(self) -> Any:
        # built on the first get()
        if not self.__created:
            self.__instance = register_close(self.__factory(*(it.get() for it in self.__dependencies)))
            self.__created = True
        return self.__instance


class InstanceProvider(Provider):
    def __init__(self, instance: Any):
        self.instance: Final = register_close(instance)

    def get(self) -> Any:
        return self.instance
