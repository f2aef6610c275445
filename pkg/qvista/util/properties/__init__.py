from .property import Property, IntProperty, FloatProperty, StrProperty, PropertyChangeEvent
from .settings import Settings
