"""Run reports: verdict lists with deterministic JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .suites import Item


@dataclass
class RunReport:
    command: list
    grid: dict
    seed: int
    items: list = field(default_factory=list)
    timing: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(it.verdict == "pass" for it in self.items)

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "error": 0}
        for it in self.items:
            out[it.verdict] += 1
        return out

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "command": self.command,
            "grid": self.grid,
            "seed": self.seed,
            "items": [it.to_json() for it in self.items],
            "counts": self.counts(),
            "passed": self.passed,
            "exit_status": self.exit_status,
        }
        if self.extra:
            d["extra"] = self.extra
        if timing:
            d["timing_seconds"] = round(self.timing, 3)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        items = [Item(x["params"], x["verdict"], x["details"]) for x in d["items"]]
        return cls(d["command"], d["grid"], d["seed"], items, d.get("timing_seconds", 0.0), d.get("extra", {}))

    def to_text(self) -> str:
        lines = []
        for it in self.items:
            params = " ".join(f"{k}={v}" for k, v in it.params.items())
            lines.append(f"{it.verdict.upper():5} {params}")
        c = self.counts()
        lines.append(f"{c['pass']} passed, {c['fail']} failed, {c['error']} errors (seed {self.seed})")
        return "\n".join(lines)
