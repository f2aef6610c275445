from dataclasses import dataclass
from typing import Self

import numpy as np

from qvista.util.const import UNIT_TOLERANCE
from .errors import SphereError
from .space import FiniteMetricSpace


@dataclass(frozen=True)
class SpherePoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = float(np.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2))
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise SphereError(f'({self.x}, {self.y}, {self.z}) is not a unit vector (norm {norm})')

    @classmethod
    def from_complex(cls, value: complex) -> Self:
        return cls(*to_sphere(np.asarray([value]))[0])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def to_complex(self) -> complex:
        return complex(from_sphere(self.vector[None, :])[0])


def to_sphere(values: np.ndarray) -> np.ndarray:
    """Inverse stereographic projection; infinite entries map to the north pole."""
    values = np.asarray(values, dtype=complex)
    out = np.zeros(values.shape + (3,))
    infinite = ~np.isfinite(values)
    finite = values[~infinite]
    scale = 1.0 + np.abs(finite) ** 2
    out[~infinite] = np.stack([2 * finite.real / scale,
                               2 * finite.imag / scale,
                               (np.abs(finite) ** 2 - 1) / scale], axis=-1)
    out[infinite] = (0.0, 0.0, 1.0)
    return out


def from_sphere(vectors: np.ndarray) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=float)
    denominator = 1.0 - vectors[..., 2]
    with np.errstate(divide='ignore', invalid='ignore'):
        values = (vectors[..., 0] + 1j * vectors[..., 1]) / denominator
    return np.where(denominator <= UNIT_TOLERANCE, complex(np.inf, 0), values)


def spherical_distance(p: SpherePoint, q: SpherePoint) -> float:
    return float(spherical_distances(p.vector[None, :], q.vector[None, :])[0, 0])


def spherical_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Great-circle angles between rows of ``a`` and rows of ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dots = a @ b.T
    crosses = np.linalg.norm(np.cross(a[:, None, :], b[None, :, :]), axis=-1)
    return np.arctan2(crosses, dots)


def spherical_space(values: np.ndarray) -> FiniteMetricSpace:
    vectors = to_sphere(values)
    dist = spherical_distances(vectors, vectors)
    dist = (dist + dist.T) / 2
    np.fill_diagonal(dist, 0.0)
    return FiniteMetricSpace(dist, vectors)
