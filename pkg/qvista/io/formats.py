import json
from pathlib import Path
from typing import Any, Self, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from qvista.covers import CoverSequence, CoverError, Thresholds
from qvista.metric import FiniteMetricSpace, MetricError
from .errors import FormatError

M = TypeVar('M', bound=BaseModel)


class SpaceFile(BaseModel):
    model_config = ConfigDict(extra='forbid')

    n: int | None = Field(default=None, ge=0)
    dist: list[list[float]] | None = None
    coords: list[list[float]] | None = None
    labels: list[str] | None = None

    @model_validator(mode='after')
    def check_source(self) -> Self:
        if self.dist is None and self.coords is None:
            raise ValueError('a space needs either "dist" or "coords"')
        count = len(self.dist if self.dist is not None else self.coords)
        if self.n is not None and self.n != count:
            raise ValueError(f'"n" is {self.n} but the space lists {count} points')
        return self

    @classmethod
    def from_space(cls, space: FiniteMetricSpace) -> Self:
        return cls(n=space.n,
                   dist=space.dist.tolist(),
                   coords=None if space.coords is None else space.coords.tolist(),
                   labels=None if space.labels is None else list(space.labels))

    def to_space(self) -> FiniteMetricSpace:
        labels = None if self.labels is None else tuple(self.labels)
        try:
            if self.dist is not None:
                coords = None if self.coords is None else np.asarray(self.coords)
                return FiniteMetricSpace(np.asarray(self.dist), coords, labels)
            space = FiniteMetricSpace.from_coords(self.coords)
            return space if labels is None else FiniteMetricSpace(space.dist, space.coords, labels)
        except (MetricError, ValueError) as e:
            raise FormatError(f'invalid space: {e}') from e


class CoverFile(BaseModel):
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    levels: list[list[list[int]]]
    width: int = Field(default=0, ge=0)
    visual_parameter: float | None = Field(default=None, gt=1, alias='lambda')
    sample_map: list[int] | None = None

    @classmethod
    def from_cover(cls, cover: CoverSequence, sample_map: np.ndarray | None = None) -> Self:
        return cls(levels=cover.member_lists(), width=cover.width, visual_parameter=cover.visual_parameter,
                   sample_map=None if sample_map is None else [int(it) for it in sample_map])

    def discrete_space(self) -> FiniteMetricSpace:
        """Unit distances on the points the levels mention, for runs that only need tile membership."""
        count = 1 + max((point for family in self.levels for tile in family for point in tile), default=-1)
        try:
            return FiniteMetricSpace(1.0 - np.eye(count))
        except (MetricError, ValueError) as e:
            raise FormatError(f'invalid cover: {e}') from e

    def to_cover(self, space: FiniteMetricSpace) -> CoverSequence:
        try:
            return CoverSequence(space, self.levels, self.width, self.visual_parameter)
        except CoverError as e:
            raise FormatError(f'invalid cover: {e}') from e


def load_model(path: str | Path, model: type[M]) -> M:
    try:
        return model.model_validate_json(Path(path).read_text(encoding='utf-8'))
    except ValidationError as e:
        raise FormatError(f'{path}: {e}') from e


def save_model(path: str | Path, model: BaseModel):
    Path(path).write_text(json.dumps(model.model_dump(by_alias=True, exclude_none=True), sort_keys=True) + '\n',
                          encoding='utf-8')


def load_space(path: str | Path) -> FiniteMetricSpace:
    return load_model(path, SpaceFile).to_space()


def load_cover(path: str | Path, space: FiniteMetricSpace) -> CoverSequence:
    return load_model(path, CoverFile).to_cover(space)


def load_thresholds(text: str | None) -> Thresholds:
    """Thresholds from inline JSON or from a file holding it."""
    if text is None:
        return Thresholds()
    source: Any = text
    if not text.lstrip().startswith('{'):
        source = Path(text).read_text(encoding='utf-8')
    try:
        return Thresholds.model_validate_json(source)
    except ValidationError as e:
        raise FormatError(f'invalid thresholds: {e}') from e
