import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from qvista.covers import ConditionRecord, Verdict
from qvista.metric import FiniteMetricSpace
from qvista.proximity import PowerDistortionFit, SnowflakeFit
from qvista.util.enum import EnhancedEnum
from .metric import BoundaryMetricApprox


class Regularity(EnhancedEnum, StrEnum):
    SNOWFLAKE = 'snowflake'
    QUASISYMMETRY = 'quasisymmetry'
    FAIL = 'FAIL'


class RegularityCheck(EnhancedEnum, StrEnum):
    SNOWFLAKE = 'snowflake'
    QS = 'qs'
    BOTH = 'both'


@dataclass(frozen=True)
class RegularityResult:
    classification: Regularity
    snowflake: SnowflakeFit | None
    power: PowerDistortionFit | None
    points: int


def phi_injectivity_check(boundary: BoundaryMetricApprox) -> list[ConditionRecord]:
    """Truncated injectivity of the identification with the boundary; surjectivity is not certifiable."""
    collapsed = np.argwhere(~boundary.separated() & ~np.eye(boundary.n, dtype=bool))
    records = []
    if collapsed.size:
        x, y = collapsed[0]
        records.append(ConditionRecord('phi.injective', float(len(collapsed) // 2), 0.0, Verdict.FAIL,
                                       {'points': [int(x), int(y)]}))
    else:
        records.append(ConditionRecord('phi.injective', 0.0, 0.0, Verdict.PASS))
    records.append(ConditionRecord('phi.surjective', 0.0, None, Verdict.NOT_APPLICABLE,
                                   {'reason': f'level-{boundary.depth} approximation'}))
    return records


def regularity_spaces(space: FiniteMetricSpace,
                      boundary: BoundaryMetricApprox) -> tuple[FiniteMetricSpace, FiniteMetricSpace]:
    """Both metrics restricted to one point per level-N tile, where the boundary metric is positive."""
    chosen = boundary.representatives()
    return space.subspace(chosen), FiniteMetricSpace(boundary.dist[np.ix_(chosen, chosen)])


def classify(snowflake: SnowflakeFit | None, power: PowerDistortionFit | None, points: int) -> RegularityResult:
    if snowflake is not None and snowflake.verdict == Verdict.PASS:
        classification = Regularity.SNOWFLAKE
    elif power is not None and power.verdict == Verdict.PASS:
        classification = Regularity.QUASISYMMETRY
    else:
        classification = Regularity.FAIL
    logging.info(f'boundary identification is {classification} on {points} representatives')
    return RegularityResult(classification, snowflake, power, points)


def regularity_records(result: RegularityResult) -> list[ConditionRecord]:
    """One verdict for the classification; the individual fits are informational."""
    verdict = Verdict.FAIL if result.classification == Regularity.FAIL else Verdict.PASS
    records = [ConditionRecord('phi.regularity', float(result.points), None, verdict,
                               {'classification': str(result.classification)})]
    if result.snowflake is not None:
        fit = result.snowflake
        records.append(ConditionRecord('phi.snowflake', fit.log_residual, None, Verdict.NOT_APPLICABLE,
                                       {'fit': str(fit.verdict), 'alpha': fit.alpha, 'c': fit.c, 'pairs': fit.pairs}))
    if result.power is not None:
        fit = result.power
        witness = {'fit': str(fit.verdict)}
        if fit.distortion is not None:
            witness.update(k=fit.distortion.k, nu=fit.distortion.nu)
        constant = fit.distortion.k if fit.distortion is not None else min(fit.k_by_nu.values(), default=0.0)
        records.append(ConditionRecord('phi.quasisymmetry', constant, None, Verdict.NOT_APPLICABLE, witness))
    return records
