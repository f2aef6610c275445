import json
import math
from enum import StrEnum
from typing import Any

import numpy as np

from qvista.covers import VerificationReport
from qvista.util.enum import EnhancedEnum


class ReportFormat(EnhancedEnum, StrEnum):
    JSON = 'json'
    TEXT = 'text'


def canonical(value: Any) -> Any:
    """Plain JSON values with floats rounded to 15 significant digits and non-finite floats as strings."""
    if isinstance(value, dict):
        return {str(key): canonical(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(item) for item in value]
    if isinstance(value, np.ndarray):
        return canonical(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(f'{value:.15g}')
    if isinstance(value, StrEnum):
        return str(value)
    return value


def render_json(payload: dict[str, Any]) -> str:
    return json.dumps(canonical(payload), sort_keys=True, indent=2)


def render_text(payload: dict[str, Any]) -> str:
    if not payload:
        return ''
    lines = [f'{payload.get("kind", "report")}: {payload.get("verdict", "")}'
             f' (depth {payload.get("depth")}, width {payload.get("width")})']
    records = payload.get('records', [])
    if records:
        name_width = max(len(it['condition']) for it in records)
        lines.append(f'{"condition":<{name_width}}  {"constant":>14}  {"threshold":>14}  verdict')
        for record in records:
            threshold = '-' if record['threshold'] is None else f'{record["threshold"]:.6g}'
            lines.append(f'{record["condition"]:<{name_width}}  {record["constant"]:>14.6g}  '
                         f'{threshold:>14}  {record["verdict"]}')
    for key, value in sorted(payload.get('derived', {}).items()):
        lines.append(f'  {key} = {value}')
    for note in payload.get('notes', []):
        lines.append(f'  note: {note}')
    return '\n'.join(lines)


def render(report: VerificationReport | dict[str, Any] | None, fmt: ReportFormat = ReportFormat.JSON) -> bytes:
    payload = {} if report is None else report if isinstance(report, dict) else report.to_dict()
    text = render_json(payload) if fmt == ReportFormat.JSON else render_text(payload)
    return (text + '\n').encode('utf-8') if text else b''


def parse(data: bytes | str) -> dict[str, Any]:
    return json.loads(data)
