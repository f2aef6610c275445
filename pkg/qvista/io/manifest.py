import hashlib
from pathlib import Path
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, Field

from qvista.app_version import get_version


def hash_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as file:
        for chunk in iter(lambda: file.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


class RunManifest(BaseModel):
    model_config = ConfigDict(extra='forbid')

    command: str
    inputs: dict[str, str] = Field(default_factory=dict)
    parameters: dict[str, Any] = Field(default_factory=dict)
    seed: int = 0
    version: str = Field(default_factory=get_version)

    @classmethod
    def create(cls, command: str, inputs: dict[str, str | Path | None], seed: int, **parameters) -> Self:
        hashes = {name: hash_file(path) for name, path in sorted(inputs.items()) if path is not None}
        return cls(command=command, inputs=hashes, seed=seed,
                   parameters={key: value for key, value in sorted(parameters.items()) if value is not None})
