import atexit
from abc import abstractmethod
from typing import Any


class CloseListener:
    """Components that flush state when the process exits."""

    @abstractmethod
    def _on_close(self):
        ...


def register_close(instance: Any) -> Any:
    if isinstance(instance, CloseListener):
        atexit.register(instance._on_close)
    return instance
