"""Machine-readable run reports with byte-stable JSON."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"


def canonical(obj):
    """Round floats to 12 significant digits and turn tuples and sets into lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(canonical(v) for v in obj)
    if hasattr(obj, "to_json"):
        return canonical(obj.to_json())
    if hasattr(obj, "item"):  # numpy scalars
        return canonical(obj.item())
    return str(obj)


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)  # path -> sha256
    verdicts: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    wall_time: float | None = None
    schema_version: str = SCHEMA_VERSION

    def to_json(self) -> dict:
        out = {
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "results": self.results,
            "witnesses": self.witnesses,
        }
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return canonical(out)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False)

    def text(self) -> str:
        """A flat human-readable rendering."""
        lines = [f"command: {self.command}"]
        for section in ("verdicts", "results", "witnesses"):
            data = getattr(self, section)
            if data:
                lines.append(f"{section}:")
                for key, val in _flatten(canonical(data)):
                    lines.append(f"  {key}: {val}")
        return "\n".join(lines)


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list) and obj and all(isinstance(v, dict) for v in obj) and len(obj) <= 20:
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(obj, ensure_ascii=False) if isinstance(obj, (list, dict)) else obj
