import logging
from abc import abstractmethod
from contextlib import contextmanager
from typing import Any, Final, Iterator, override

from PySide6.QtCore import QObject, QSettings, Signal

from qvista.util.injector.lifecycle import CloseListener
from .property import Property


class Settings(QObject, CloseListener):
    """
    A group of properties stored under ``group`` in a QSettings file. Class-level Property
    declarations are cloned per instance; command-line overrides stay out of the file.
    """
    settings_changed: Final[Signal] = Signal()

    def __init__(self, settings: QSettings):
        QObject.__init__(self, None)
        self.settings: Final[QSettings] = settings
        self.__properties: Final[dict[str, Property]] = {}

        declared = {name: value for klass in reversed(type(self).__mro__)
                    for name, value in vars(klass).items() if isinstance(value, Property)}
        for name, declaration in declared.items():
            bound = declaration.clone(name)
            bound.on_change(lambda _: self.settings_changed.emit())
            self.__properties[name] = bound
            setattr(self, name, bound)
        self._deserialize()

    @contextmanager
    def __grouped(self) -> Iterator[QSettings]:
        self.settings.beginGroup(self.group)
        try:
            yield self.settings
        finally:
            self.settings.endGroup()

    def _deserialize(self):
        with self.__grouped() as stored:
            for name, prop in self.__properties.items():
                if not stored.contains(name):
                    continue
                value = stored.value(name, None, prop.value_type)
                try:
                    prop.set(value)
                except (TypeError, ValueError) as e:
                    logging.warning(f'ignoring stored {self.group}/{name}={value!r}: {e}')

    def _serialize(self):
        with self.__grouped() as stored:
            for name, prop in self.__properties.items():
                if not prop.transient:
                    stored.setValue(name, prop.get())
        self.settings.sync()

    @property
    def properties(self) -> dict[str, Property]:
        return dict(self.__properties)

    def apply_overrides(self, overrides: dict[str, Any]):
        """Run-scoped values, usually from the command line; None leaves a property alone."""
        for name, value in overrides.items():
            if value is None:
                continue
            if name not in self.__properties:
                raise KeyError(f'{self.group} has no setting named {name}')
            self.__properties[name].override(value)

    def to_dict(self) -> dict[str, Any]:
        return {name: prop.get() for name, prop in self.__properties.items()}

    def reset(self):
        for prop in self.__properties.values():
            prop.reset()

    @override
    def _on_close(self):
        self._serialize()

    @property
    @abstractmethod
    def group(self) -> str:
        ...
