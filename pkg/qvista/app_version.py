from importlib import metadata

__version__ = '1.0.0'


def get_version() -> str:
    try:
        return metadata.version('qvista')
    except metadata.PackageNotFoundError:
        return __version__
