"""Predefined recovery strategy ladder.

Per fault subject the agent walks a fixed rung sequence, cheapest remedy
first, and hands the problem to the center when the ladder runs out. A
quiet window resets the subject back to rung zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

LADDER_RUNGS = ("RESTART_FUNCTION", "RESTART_FRAMEWORK", "REINSTALL_PACKAGE",
                "REBOOT_AGENT", "ESCALATE_TO_CENTER")
ESCALATE = "ESCALATE_TO_CENTER"
DEFAULT_WINDOW_S = 600.0


@dataclass(frozen=True)
class StrategyOutcome:
    subject: str
    rung: str
    rung_index: int
    recovered: bool
    at: float


@dataclass
class _SubjectState:
    next_rung: int = 0
    last_fault_at: float = float("-inf")


@dataclass
class StrategyLadder:
    window: float = DEFAULT_WINDOW_S
    _subjects: dict[str, _SubjectState] = field(default_factory=dict)
    applications: list[StrategyOutcome] = field(default_factory=list)

    def next_rung(self, subject: str, now: float) -> tuple[str, int]:
        """The rung that would apply for a fault on `subject` at `now`."""
        state = self._subjects.get(subject)
        if state is None or now - state.last_fault_at > self.window:
            return LADDER_RUNGS[0], 0
        index = min(state.next_rung, len(LADDER_RUNGS) - 1)
        return LADDER_RUNGS[index], index

    def advance(self, subject: str, now: float) -> tuple[str, int]:
        """Consume the next rung for `subject`; never steps downward in-window."""
        rung, index = self.next_rung(subject, now)
        state = self._subjects.setdefault(subject, _SubjectState())
        state.next_rung = index + 1
        state.last_fault_at = now
        return rung, index

    def record(self, outcome: StrategyOutcome) -> None:
        self.applications.append(outcome)

    def exhausted(self, subject: str, now: float) -> bool:
        rung, _ = self.next_rung(subject, now)
        return rung == ESCALATE

    def reset(self, subject: str | None = None) -> None:
        if subject is None:
            self._subjects.clear()
        else:
            self._subjects.pop(subject, None)

    def rungs_applied(self, subject: str) -> list[str]:
        return [o.rung for o in self.applications if o.subject == subject]
