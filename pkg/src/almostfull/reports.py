"""Machine-readable run reports: canonical JSON, optional CSV tables.

Reports are byte-deterministic for a fixed command and seed: keys are
sorted, rationals are rendered as ``"p/q"`` strings, and no floating-point
value ever appears.  Wall-clock timings are attached only on request, since
they would break determinism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    error_bounds: dict = field(default_factory=dict)
    prefix_depths: dict = field(default_factory=dict)
    timings: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "error_bounds": self.error_bounds,
            "prefix_depths": self.prefix_depths,
        }
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def rows_to_csv(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"
