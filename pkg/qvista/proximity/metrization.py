import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import floyd_warshall

from qvista.metric import FiniteMetricSpace, require_valid
from .errors import KTooLarge, LambdaTooLarge, QuasiMetricViolation, SandwichViolation
from .table import ProximityTable

# relative tolerance for comparisons that hold exactly in real arithmetic
RELATIVE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class QuasiMetric:
    q: np.ndarray
    k: float

    def violation(self) -> QuasiMetricViolation | None:
        q = self.q
        n = q.shape[0]
        if np.any(np.diag(q) != 0):
            i = int(np.flatnonzero(np.diag(q))[0])
            return QuasiMetricViolation(f'q({i}, {i}) is not zero', (i,))
        off = ~np.eye(n, dtype=bool)
        if np.any(q[off] <= 0):
            i, j = np.argwhere((q <= 0) & off)[0]
            return QuasiMetricViolation(f'q({i}, {j}) is not positive', (int(i), int(j)))
        if np.any(q != q.T):
            i, j = np.argwhere(q != q.T)[0]
            return QuasiMetricViolation(f'q is not symmetric at ({i}, {j})', (int(i), int(j)))
        for z in range(n):
            bound = self.k * np.maximum(q[:, z, None], q[None, z, :]) * (1 + RELATIVE_SLACK)
            bad = np.argwhere(q > bound)
            if bad.size:
                x, y = bad[0]
                return QuasiMetricViolation(f'q({x}, {y}) exceeds {self.k} max(q({x}, {z}), q({z}, {y}))',
                                            (int(x), int(y), z))
        return None


def quasi_metric_from_m(table: ProximityTable, lam: float, c_cv: float) -> QuasiMetric:
    k = lam ** c_cv
    if k > 2:
        raise LambdaTooLarge(lam, c_cv)
    q = lam ** -table.levels().astype(float)
    np.fill_diagonal(q, 0.0)
    quasi = QuasiMetric(q, k)
    violation = quasi.violation()
    if violation is not None:
        raise violation
    return quasi


def chain_metrize(quasi: QuasiMetric) -> FiniteMetricSpace:
    """Shortest chains over the complete graph weighted by q, checked against q/(2K) <= d <= q."""
    if quasi.k > 2:
        raise KTooLarge(quasi.k)
    d = floyd_warshall(quasi.q, directed=False)
    low = quasi.q / (2 * quasi.k)
    outside = (d > quasi.q * (1 + RELATIVE_SLACK)) | (d < low * (1 - RELATIVE_SLACK))
    if outside.any():
        i, j = (int(it) for it in np.argwhere(outside)[0])
        raise SandwichViolation(i, j, float(d[i, j]), float(low[i, j]), float(quasi.q[i, j]))
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0.0)
    return require_valid(FiniteMetricSpace(d))


def visual_characterization_constant(space: FiniteMetricSpace, table: ProximityTable, lam: float) -> tuple[float, tuple[int, int] | None]:
    """Scale-free comparability of d(x, y) with lam^-m(x, y) over distinct pairs: sqrt(max / min)."""
    if space.n < 2:
        return 1.0, None
    off = ~np.eye(space.n, dtype=bool)
    ratios = space.dist * lam ** table.levels().astype(float)
    values = ratios[off]
    high, low = float(values.max()), float(values.min())
    worst = np.argwhere(off & (ratios == high))[0]
    if low <= 0:
        return math.inf, (int(worst[0]), int(worst[1]))
    return math.sqrt(high / low), (int(worst[0]), int(worst[1]))
