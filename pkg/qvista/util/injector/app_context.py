import importlib
import logging
import pkgutil
from typing import TypeVar

from .component import ComponentDefinition, ComponentError, get_definitions
from .provider import Provider, SingletonProvider

T = TypeVar('T')


class AppContext:
    """Imports the given packages and wires every registered component from its annotations."""

    def __init__(self,
                 base_packages: list[str],
                 provided: dict[type, Provider] | None = None):
        self.__providers: dict[type, Provider] = dict(provided or {})
        for package in base_packages:
            self.__import_all(package)

        definitions = get_definitions()
        for component_type in definitions:
            self.__resolve(definitions, component_type, ())
        logging.debug(f'app context ready with {len(self.__providers)} providers')

    def __contains__(self, component_type: type) -> bool:
        return component_type in self.__providers

    def get_component(self, component_type: type[T]) -> T:
        try:
            return self.__providers[component_type].get()
        except KeyError:
            raise ComponentError(f'{component_type.__name__} is not a registered component') from None

    @staticmethod
    def __import_all(package_name: str):
        package = importlib.import_module(package_name)
        for module in pkgutil.walk_packages(package.__path__, f'{package_name}.'):
            importlib.import_module(module.name)

    def __resolve(self,
                  definitions: dict[type, ComponentDefinition],
                  component_type: type,
                  resolving: tuple[type, ...]) -> Provider:
        if component_type in self.__providers:
            return self.__providers[component_type]
        if component_type in resolving:
            chain = ' -> '.join(it.__name__ for it in (*resolving, component_type))
            raise ComponentError(f'circular dependency: {chain}')
        if component_type not in definitions:
            raise ComponentError(f'nothing provides {component_type.__name__}')

        definition = definitions[component_type]
        dependencies = [self.__resolve(definitions, it, (*resolving, component_type)) for it in definition.dependencies]
        provider = SingletonProvider(definition.factory, dependencies)
        self.__providers[component_type] = provider
        return provider
