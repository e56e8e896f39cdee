"""Machine- and human-readable verdict reports.

A report is an ordered list of named check outcomes.  Serialization is
deterministic: identical inputs produce byte-identical output.  Statuses:

* ``pass`` / ``fail``       -- an exact assertion held / was violated
* ``solved``                -- an analysis ran and produced values
* ``not-applicable``        -- prerequisites of the check do not hold
* ``outside-hypothesis``    -- the check ran, but the backing theorem
                               assumes a hypothesis this input lacks

Only ``fail`` affects the exit code.  Payload values are canonical
expression strings, integers or booleans; never floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
SOLVED = "solved"
NOT_APPLICABLE = "not-applicable"
OUTSIDE_HYPOTHESIS = "outside-hypothesis"

_STATUSES = {PASS, FAIL, SOLVED, NOT_APPLICABLE, OUTSIDE_HYPOTHESIS}


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    status: str
    payload: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in _STATUSES:
            raise ValueError(f"invalid status {self.status!r}")


@dataclass
class VerdictReport:
    tool_version: str
    fixture: str
    checks: list[CheckOutcome]
    schema_version: int = SCHEMA_VERSION

    @property
    def exit_code(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_doc(self) -> dict:
        return {
            "version": self.tool_version,
            "schema_version": self.schema_version,
            "fixture": self.fixture,
            "checks": [
                {"name": c.name, "status": c.status, "payload": dict(c.payload)}
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"fixture: {self.fixture}",
                 f"tool: parasol {self.tool_version} (report schema {self.schema_version})",
                 ""]
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            parts = "; ".join(f"{k} = {_render(v)}" for k, v in c.payload.items())
            line = f"  {c.name:<{width}}  {c.status:<18}"
            lines.append(f"{line} {parts}".rstrip())
        lines.append("")
        counts: dict[str, int] = {}
        for c in self.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        summary = ", ".join(f"{counts[s]} {s}" for s in
                            (PASS, FAIL, SOLVED, NOT_APPLICABLE, OUTSIDE_HYPOTHESIS)
                            if s in counts)
        lines.append(f"summary: {summary}")
        return "\n".join(lines) + "\n"


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_render(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_render(v) for v in value) + "]"
    return str(value)
