import typing
from dataclasses import dataclass
from typing import Any, Callable, Final


class ComponentError(Exception):
    pass


@dataclass(frozen=True)
class ComponentDefinition:
    factory: Callable[..., Any]
    dependencies: tuple[type, ...]


__registry: Final[dict[type, ComponentDefinition]] = {}


def _hints(factory: Callable[..., Any]) -> dict[str, Any]:
    target = factory.__init__ if isinstance(factory, type) else factory
    try:
        return typing.get_type_hints(target)
    except NameError as e:
        raise ComponentError(f'cannot resolve the annotations of {factory.__qualname__}: {e}') from e


def component():
    """
    Registers a singleton with the app context: either a class, resolved through its constructor
    annotations, or a factory function whose return annotation names the type it provides.
    """

    def decorate(decorated):
        if not callable(decorated):
            raise ComponentError('component() applies to classes and factory functions only')
        hints = _hints(decorated)
        provided = decorated if isinstance(decorated, type) else hints.pop('return', None)
        if provided is None:
            raise ComponentError(f'factory {decorated.__qualname__} needs a return annotation')
        hints.pop('return', None)
        __registry[provided] = ComponentDefinition(decorated, tuple(hints.values()))
        return decorated

    return decorate


def get_definitions() -> dict[type, ComponentDefinition]:
    return dict(__registry)
