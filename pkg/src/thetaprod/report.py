"""Structured run reports with deterministic JSON rendering.

Every CLI command produces a RunReport: a list of per-check records plus
run metadata.  JSON output is byte-stable across runs of the same inputs
except for the wall_ms field, so reports can be diffed or archived.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckRecord:
    name: str          # e.g. "dup3 numeric q=0.05"
    kind: str          # value | identity-numeric | identity-series | ...
    verdict: str       # pass | fail | skip
    details: dict = field(default_factory=dict)   # JSON-safe scalars only

    @property
    def failed(self) -> bool:
        return self.verdict == "fail"


@dataclass(frozen=True)
class RunReport:
    command: str
    digits: int
    records: tuple[CheckRecord, ...]
    series_order: int | None = None
    wall_ms: int = 0

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for rec in self.records:
            out[rec.verdict] = out.get(rec.verdict, 0) + 1
        return out

    @property
    def passed(self) -> bool:
        return self.counts["fail"] == 0

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "digits": self.digits,
            "series_order": self.series_order,
            "counts": self.counts,
            "verdict": "pass" if self.passed else "fail",
            "wall_ms": self.wall_ms,
            "checks": [
                {"name": r.name, "kind": r.kind, "verdict": r.verdict,
                 "details": r.details}
                for r in self.records
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2)


def render_text(report: RunReport) -> str:
    lines = []
    for rec in report.records:
        mark = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[rec.verdict]
        detail = " ".join(f"{k}={v}" for k, v in sorted(rec.details.items()))
        lines.append(f"{mark}  {rec.name}" + (f"  [{detail}]" if detail else ""))
    c = report.counts
    lines.append(f"{report.command}: {len(report.records)} checks, "
                 f"{c['pass']} pass, {c['fail']} fail, {c['skip']} skip "
                 f"({report.wall_ms} ms)")
    return "\n".join(lines)
