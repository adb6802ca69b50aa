"""Report records and their text and JSON renderings.

A record is one analysis result with the fields command, params, verdicts,
values and evidence.  JSON output is one line per record with sorted keys,
so emitting, parsing and re-emitting a record gives identical bytes.
Complex numbers become ``[re, im]`` pairs and NaN becomes ``null``;
infinities are written as the strings ``"inf"`` and ``"-inf"``.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field

import numpy as np

RECORD_FIELDS = ("command", "params", "verdicts", "values", "evidence")


def jsonable(obj):
    """Convert numpy and library objects into plain JSON data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


@dataclass(frozen=True)
class Record:
    command: str
    params: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)

    def to_data(self) -> dict:
        return {name: jsonable(getattr(self, name)) for name in RECORD_FIELDS}


def to_json(record: Record | dict) -> str:
    data = record.to_data() if isinstance(record, Record) else record
    return json.dumps(data, sort_keys=True, separators=(", ", ": "), allow_nan=False)


def from_json(line: str) -> dict:
    data = json.loads(line)
    missing = [name for name in RECORD_FIELDS if name not in data]
    if missing:
        raise ValueError(f"report record lacks fields {missing}")
    return data


def _render(value, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key in value:
            item = value[key]
            if isinstance(item, (dict, list)) and item and not _flat_list(item):
                lines.append(f"{pad}{key}:")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, (dict, list)) and item and not _flat_list(item):
                lines.append(f"{pad}-")
                lines.extend(_render(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
        return lines
    return [f"{pad}{_scalar(value)}"]


def _flat_list(item) -> bool:
    return isinstance(item, list) and all(not isinstance(v, (dict, list)) for v in item)


def _scalar(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    if value is None:
        return "n/a"
    return str(value)


def to_text(record: Record) -> str:
    data = record.to_data()
    lines = [f"== {data['command']} =="]
    for name in RECORD_FIELDS[1:]:
        if data[name]:
            lines.append(f"{name}:")
            lines.extend(_render(data[name], 1))
    return "\n".join(lines)


__all__ = ["Record", "jsonable", "to_json", "from_json", "to_text", "RECORD_FIELDS"]
