"""Run reports: what a scenario run produced, rendered for humans and JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class AssertOutcome:
    at: float
    metric: str
    op: str
    expected: object
    actual: object
    passed: bool

    def to_dict(self) -> dict:
        return {"at": self.at, "metric": self.metric, "op": self.op,
                "expected": self.expected, "actual": self.actual,
                "passed": self.passed}


@dataclass
class RunReport:
    scenario: str
    seed: int
    duration: float
    wall_seconds: float
    summary: dict
    convergence_times: dict[str, float | None]
    asserts: list[AssertOutcome]
    fault_count: int
    trace_digest: str
    counters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.asserts)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "duration": self.duration,
            "wall_seconds": round(self.wall_seconds, 3),
            "summary": self.summary,
            "convergence_times": self.convergence_times,
            "asserts": [a.to_dict() for a in self.asserts],
            "fault_count": self.fault_count,
            "trace_digest": self.trace_digest,
            "counters": self.counters,
            "passed": self.passed,
        }

    def render(self) -> str:
        lines = [f"scenario {self.scenario} seed={self.seed} "
                 f"virtual={self.duration:.1f}s wall={self.wall_seconds:.2f}s"]
        lines.append(f"fleet: {json.dumps(self.summary, sort_keys=True)}")
        converged = [t for t in self.convergence_times.values() if t is not None]
        lines.append(f"converged: {len(converged)}/{len(self.convergence_times)}"
                     + (f" (last at {max(converged):.1f}s)" if converged else ""))
        lines.append(f"faults logged: {self.fault_count}")
        for a in self.asserts:
            status = "PASS" if a.passed else "FAIL"
            lines.append(f"assert t={a.at:g} {a.metric} {a.op} {a.expected!r}: "
                         f"{status} (actual {a.actual!r})")
        lines.append(f"trace digest: {self.trace_digest}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)
