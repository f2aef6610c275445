import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from qvista.util.enum import EnhancedEnum
from .errors import TripleBudgetExceeded
from .graph import TileGraph


class ScanMode(EnhancedEnum, StrEnum):
    EXACT = 'exact'
    SAMPLED = 'sampled'


@dataclass(frozen=True)
class HyperbolicityResult:
    constant: float
    mode: ScanMode
    lower_bound: bool
    witness: tuple[int, int, int] | None
    triples: int


def hyperbolicity_constant(graph: TileGraph,
                           mode: ScanMode = ScanMode.EXACT,
                           vertex_cap: int = 400,
                           samples: int = 200_000,
                           seed: int = 0) -> HyperbolicityResult:
    """Smallest C with (X.Y) >= min((X.Z), (Z.Y)) - C, on doubled products."""
    doubled = graph.doubled_products
    size = graph.size
    worst, witness = 0, None

    if mode == ScanMode.EXACT:
        if size > vertex_cap:
            raise TripleBudgetExceeded(size, vertex_cap)
        for z in range(size):
            excess = np.minimum(doubled[:, z, None], doubled[None, z, :]) - doubled
            position = int(np.argmax(excess))
            x, y = divmod(position, size)
            if excess[x, y] > worst:
                worst, witness = int(excess[x, y]), (x, y, z)
        triples = size ** 3
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(size, size=(3, samples))
        excess = np.minimum(doubled[x, z], doubled[z, y]) - doubled[x, y]
        best = int(np.argmax(excess))
        if excess[best] > 0:
            worst, witness = int(excess[best]), (int(x[best]), int(y[best]), int(z[best]))
        triples = samples

    result = HyperbolicityResult(worst / 2, mode, mode == ScanMode.SAMPLED, witness, triples)
    logging.info(f'hyperbolicity constant {result.constant} ({mode}, {triples} triples)')
    return result
