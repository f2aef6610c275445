import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from qvista.covers import Verdict
from qvista.metric import FiniteMetricSpace


@dataclass(frozen=True)
class PowerDistortion:
    k: float
    nu: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f'distortion constant must be at least 1, got {self.k}')
        if not 0 < self.nu <= 1:
            raise ValueError(f'distortion exponent must lie in (0, 1], got {self.nu}')

    def eta(self, t: np.ndarray | float) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.k * np.maximum(t ** self.nu, t ** (1 / self.nu))


@dataclass(frozen=True)
class PowerDistortionFit:
    verdict: Verdict
    distortion: PowerDistortion | None
    k_by_nu: dict[float, float]
    points: int


@dataclass(frozen=True)
class SnowflakeFit:
    verdict: Verdict
    alpha: float
    c: float
    log_residual: float
    pairs: int


def _log_distortion(d1: np.ndarray, d2: np.ndarray, nus: np.ndarray) -> np.ndarray:
    """log K(nu) for d2(x,y)/d2(x,z) <= K max(t^nu, t^(1/nu)), t = d1(x,y)/d1(x,z)."""
    n = d1.shape[0]
    worst = np.full(nus.size, -np.inf)
    for x in range(n):
        others = np.arange(n) != x
        log_a = np.log(d1[x, others])
        log_b = np.log(d2[x, others])
        log_t = log_a[:, None] - log_a[None, :]
        log_ratio = log_b[:, None] - log_b[None, :]
        bound = np.maximum(nus[:, None, None] * log_t, log_t / nus[:, None, None])
        worst = np.maximum(worst, (log_ratio - bound).reshape(nus.size, -1).max(axis=1))
    return worst


def _restrict(d1: np.ndarray, d2: np.ndarray, max_points: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    n = d1.shape[0]
    if n <= max_points:
        return d1, d2
    chosen = np.sort(np.random.default_rng(seed).choice(n, max_points, replace=False))
    return d1[np.ix_(chosen, chosen)], d2[np.ix_(chosen, chosen)]


def fit_power_quasisymmetry(space_d1: FiniteMetricSpace,
                            space_d2: FiniteMetricSpace,
                            nu_grid: list[float],
                            cap: float = 1e6,
                            knee: float = 1.5,
                            max_points: int = 256,
                            seed: int = 0) -> PowerDistortionFit:
    """
    Best power distortion of the identity (S, d1) -> (S, d2) over the exponent grid, checked in
    both directions. The largest exponent whose constant is within ``knee`` of the grid minimum wins.
    """
    if space_d1.n != space_d2.n:
        raise ValueError(f'point sets differ: {space_d1.n} vs {space_d2.n} points')
    d1, d2 = _restrict(space_d1.dist, space_d2.dist, max_points, seed)
    nus = np.asarray(sorted(nu_grid), dtype=float)
    if d1.shape[0] < 2:
        return PowerDistortionFit(Verdict.PASS, PowerDistortion(1.0, 1.0), {float(nu): 1.0 for nu in nus}, d1.shape[0])

    log_k = np.maximum(_log_distortion(d1, d2, nus), _log_distortion(d2, d1, nus))
    k_values = np.exp(np.maximum(log_k, 0.0))
    k_by_nu = {float(nu): float(k) for nu, k in zip(nus, k_values)}
    best = float(k_values.min())
    if best > cap:
        logging.info(f'no power distortion below {cap:g} (best {best:.3g})')
        return PowerDistortionFit(Verdict.FAIL, None, k_by_nu, d1.shape[0])

    eligible = np.flatnonzero((k_values <= knee * best) & (k_values <= cap))
    chosen = int(eligible.max())
    distortion = PowerDistortion(float(k_values[chosen]), float(nus[chosen]))
    logging.info(f'power distortion K={distortion.k:.4g} nu={distortion.nu:.2f}')
    return PowerDistortionFit(Verdict.PASS, distortion, k_by_nu, d1.shape[0])


def snowflake_check(space_d1: FiniteMetricSpace,
                    space_d2: FiniteMetricSpace,
                    log_threshold: float = math.log(64.0)) -> SnowflakeFit:
    """Fits d2 ~ C^(+-1) d1^alpha by minimizing the half-range of log d2 - alpha log d1 over pairs."""
    upper = np.triu_indices(space_d1.n, k=1)
    a = space_d1.dist[upper]
    b = space_d2.dist[upper]
    usable = (a > 0) & (b > 0)
    if not usable.any():
        return SnowflakeFit(Verdict.PASS, 1.0, 1.0, 0.0, 0)
    log_a, log_b = np.log(a[usable]), np.log(b[usable])

    def half_range(log_alpha: float) -> float:
        residual = log_b - math.exp(log_alpha) * log_a
        return 0.5 * float(residual.max() - residual.min())

    result = minimize_scalar(half_range, bounds=(math.log(1e-3), math.log(1e3)), method='bounded',
                             options={'xatol': 1e-10})
    alpha = math.exp(result.x)
    residual = half_range(result.x)
    verdict = Verdict.PASS if residual <= log_threshold else Verdict.FAIL
    logging.info(f'snowflake fit alpha={alpha:.4f} log C={residual:.4f} ({verdict})')
    return SnowflakeFit(verdict, alpha, math.exp(residual), residual, int(usable.sum()))
