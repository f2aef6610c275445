import enum
from dataclasses import dataclass, field
from typing import Final, Sequence

import numpy as np
from scipy.spatial import distance

from qvista.util.const import TRIANGLE_SLACK
from .errors import MalformedMatrix, MetricError, NonSymmetric, ZeroOffDiagonal, NonZeroDiagonal, TriangleViolation


class Axiom(enum.Enum):
    ZERO_DIAGONAL = NonZeroDiagonal
    SYMMETRY = NonSymmetric
    POSITIVITY = ZeroOffDiagonal
    TRIANGLE = TriangleViolation


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    axiom: Axiom | None = None
    witness: tuple[int, ...] = ()

    def raise_if_failed(self):
        if not self.ok:
            raise self.axiom.value(*self.witness)


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    dist: np.ndarray
    coords: np.ndarray | None = None
    labels: tuple[str, ...] | None = None
    _diameter: float = field(init=False, repr=False)

    def __post_init__(self):
        dist = np.asarray(self.dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise MalformedMatrix(f'distance matrix must be square, got shape {dist.shape}')
        if not np.all(np.isfinite(dist)):
            raise MalformedMatrix('distance matrix has non-finite entries')
        if self.labels is not None and len(self.labels) != dist.shape[0]:
            raise MalformedMatrix(f'{len(self.labels)} labels for {dist.shape[0]} points')
        object.__setattr__(self, 'dist', _readonly(dist))
        if self.coords is not None:
            object.__setattr__(self, 'coords', _readonly(self.coords))
        object.__setattr__(self, '_diameter', float(dist.max()) if dist.size else 0.0)

    @classmethod
    def from_coords(cls, coords: np.ndarray | Sequence, metric: str = 'euclidean') -> 'FiniteMetricSpace':
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        return cls(distance.cdist(coords, coords, metric=metric), coords)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def points(self) -> range:
        return range(self.n)

    @property
    def diameter(self) -> float:
        return self._diameter

    def min_separation(self) -> float:
        if self.n < 2:
            return 0.0
        off_diagonal = self.dist[~np.eye(self.n, dtype=bool)]
        return float(off_diagonal.min())

    def subspace(self, indices: Sequence[int] | np.ndarray) -> 'FiniteMetricSpace':
        indices = np.asarray(indices, dtype=int)
        coords = None if self.coords is None else self.coords[indices]
        labels = None if self.labels is None else tuple(self.labels[i] for i in indices)
        return FiniteMetricSpace(self.dist[np.ix_(indices, indices)], coords, labels)

    def with_dist(self, dist: np.ndarray) -> 'FiniteMetricSpace':
        return FiniteMetricSpace(dist, self.coords, self.labels)


def validate_metric(space: FiniteMetricSpace) -> ValidationResult:
    """First violated axiom in the order diagonal, symmetry, positivity, triangle."""
    d: Final = space.dist
    n: Final = space.n

    diagonal = np.flatnonzero(np.diag(d) != 0)
    if diagonal.size:
        return ValidationResult(False, Axiom.ZERO_DIAGONAL, (int(diagonal[0]),))

    asymmetric = np.argwhere(d != d.T)
    if asymmetric.size:
        i, j = sorted(asymmetric[0])
        return ValidationResult(False, Axiom.SYMMETRY, (int(i), int(j)))

    non_positive = np.argwhere((d <= 0) & ~np.eye(n, dtype=bool))
    if non_positive.size:
        i, j = non_positive[0]
        return ValidationResult(False, Axiom.POSITIVITY, (int(i), int(j)))

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    for k in range(n):
        violated = (d > d[:, k, None] + d[None, k, :] + TRIANGLE_SLACK) & upper
        if violated.any():
            i, j = np.argwhere(violated)[0]
            return ValidationResult(False, Axiom.TRIANGLE, (int(i), int(j), k))

    return ValidationResult(True)


def require_valid(space: FiniteMetricSpace) -> FiniteMetricSpace:
    validate_metric(space).raise_if_failed()
    if space.n >= 2 and space.diameter <= 0:
        raise MetricError('space with at least two points must have positive diameter')
    return space
