import math
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from qvista.util.enum import EnhancedEnum


class Verdict(EnhancedEnum, StrEnum):
    PASS = 'PASS'
    FAIL = 'FAIL'
    NOT_APPLICABLE = 'N/A'


class Thresholds(BaseModel):
    model_config = ConfigDict(extra='forbid')

    default: float | None = Field(default=None, ge=0)
    conditions: dict[str, float] = Field(default_factory=dict)

    def threshold(self, condition: str, fallback: float) -> float:
        if condition in self.conditions:
            return self.conditions[condition]
        return fallback if self.default is None else self.default


@dataclass
class ConditionRecord:
    condition: str
    constant: float
    threshold: float | None
    verdict: Verdict
    witness: dict[str, Any] | None = None
    per_level: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            'condition': self.condition,
            'constant': self.constant,
            'threshold': self.threshold,
            'verdict': str(self.verdict),
            'witness': self.witness,
            'per_level': dict(self.per_level),
        }


def judge(condition: str,
          constant: float,
          threshold: float,
          witness: dict[str, Any] | None,
          per_level: dict[str, float] | None = None) -> ConditionRecord:
    passed = math.isfinite(constant) and constant <= threshold
    if not passed and witness is None:
        witness = {'reason': 'no finite constant'}
    return ConditionRecord(condition, float(constant), float(threshold),
                           Verdict.PASS if passed else Verdict.FAIL, witness, per_level or {})


@dataclass
class VerificationReport:
    kind: str
    depth: int
    width: int
    records: list[ConditionRecord] = field(default_factory=list)
    derived: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def add(self, record: ConditionRecord) -> ConditionRecord:
        self.records.append(record)
        return record

    def extend(self, other: 'VerificationReport'):
        self.records.extend(other.records)
        self.derived.update(other.derived)
        self.notes.extend(it for it in other.notes if it not in self.notes)

    def record(self, condition: str) -> ConditionRecord:
        for record in self.records:
            if record.condition == condition:
                return record
        raise KeyError(condition)

    @property
    def verdict(self) -> Verdict:
        if any(it.verdict == Verdict.FAIL for it in self.records):
            return Verdict.FAIL
        return Verdict.PASS

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            'kind': self.kind,
            'depth': self.depth,
            'width': self.width,
            'verdict': str(self.verdict),
            'records': [it.to_dict() for it in self.records],
            'derived': dict(self.derived),
            'notes': list(self.notes),
        }


def tile_witness(*tiles, **values) -> dict[str, Any]:
    return {'tiles': [tile.as_list() for tile in tiles], **values}
