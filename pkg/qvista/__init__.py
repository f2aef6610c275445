from .app_version import __version__, get_version
