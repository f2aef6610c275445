import copy
from dataclasses import dataclass
from typing import Callable, TypeVar, Generic, Self, Type, Final

T = TypeVar('T')


@dataclass(frozen=True)
class PropertyChangeEvent(Generic[T]):
    name: str
    old_value: T | None
    new_value: T | None


type PropertyChangeListener = Callable[[PropertyChangeEvent], None]


class Property(Generic[T]):
    def __init__(self,
                 initial_value: T | None = None,
                 value_type: Type[T] | None = None,
                 transient: bool = False,
                 minimum: T | None = None):
        if value_type is None and initial_value is None:
            raise ValueError('value_type must be specified if initial_value is None')
        self.initial_value: Final[T | None] = initial_value
        self.value_type: Final[Type[T]] = value_type or type(initial_value)
        self.minimum: Final[T | None] = minimum
        self.name = ''
        self.__change_listeners: list[PropertyChangeListener] = []
        self.__transient = transient
        self.__overridden = False
        self._value = initial_value

    def clone(self, name: str) -> Self:
        """Fresh copy bound to one settings instance, with no listeners attached."""
        cloned = copy.copy(self)
        cloned.name = name
        cloned.__change_listeners = []
        return cloned

    def on_change(self, listener: PropertyChangeListener):
        self.__change_listeners.append(listener)

    def get(self) -> T:
        return self._value

    def set(self, new_value: T) -> None:
        new_value = self.value_type(new_value)
        if self.minimum is not None and new_value < self.minimum:
            raise ValueError(f'{self.name} must be >= {self.minimum}, got {new_value}')
        if new_value != self._value:
            old_value = self._value
            self._value = new_value
            event = PropertyChangeEvent(self.name, old_value, new_value)
            for listener in self.__change_listeners:
                listener(event)

    def override(self, new_value: T) -> None:
        """Sets a value for this run only; overridden values are never written back."""
        self.set(new_value)
        self.__overridden = True

    def reset(self):
        self.set(self.initial_value)
        self.__overridden = False

    @property
    def transient(self) -> bool:
        return self.__transient or self.__overridden


class IntProperty(Property[int]):
    def __init__(self, initial_value: int | None = None, transient: bool = False, minimum: int | None = None):
        super().__init__(initial_value, int, transient, minimum)


class FloatProperty(Property[float]):
    def __init__(self, initial_value: float | None = None, transient: bool = False, minimum: float | None = None):
        super().__init__(initial_value, float, transient, minimum)


class StrProperty(Property[str]):
    def __init__(self, initial_value: str | None = None, transient: bool = False):
        super().__init__(initial_value, str, transient)
