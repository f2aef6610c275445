from .component import ComponentError, component
