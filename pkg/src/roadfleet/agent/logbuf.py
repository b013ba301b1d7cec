"""Station-local ring-buffer log with pattern-based analysis rules."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from datetime import datetime, timezone

from ..model import FaultEvent, FaultLayer, Severity

DEFAULT_LOG_CAPACITY = 2000


@dataclass(frozen=True)
class LogLine:
    at: float
    level: str
    subject: str
    message: str

    def render(self) -> str:
        stamp = datetime.fromtimestamp(self.at, tz=timezone.utc).isoformat()
        return f"{stamp} {self.level} {self.subject}: {self.message}"


@dataclass(frozen=True)
class LogRule:
    """Count matching lines per subject inside the window; at or past the
    threshold, synthesize one fault event for that subject."""

    name: str
    pattern: str  # regex over the message text
    level: str | None  # restrict to a level, or None for any
    threshold: int
    layer: FaultLayer
    severity: Severity
    fixed_subject: str | None = None  # override the per-line subject


DEFAULT_RULES = (
    LogRule("retry-storm", r"retry", None, 10, FaultLayer.FUNCTION, Severity.WARNING),
    LogRule("error-burst", r".", "ERROR", 5, FaultLayer.FUNCTION, Severity.ERROR),
    LogRule("link-flap", r"link down", None, 3, FaultLayer.NETWORK, Severity.WARNING,
            fixed_subject="uplink"),
)


class LogBuffer:
    def __init__(self, station: str, capacity: int = DEFAULT_LOG_CAPACITY,
                 rules: tuple[LogRule, ...] = DEFAULT_RULES):
        self.station = station
        self.lines: deque[LogLine] = deque(maxlen=capacity)
        self.rules = rules

    def write(self, at: float, level: str, subject: str, message: str) -> None:
        self.lines.append(LogLine(at, level, subject, message))

    def window(self, since: float) -> list[LogLine]:
        return [ln for ln in self.lines if ln.at >= since]

    def analyze(self, window_s: float, now: float) -> list[FaultEvent]:
        """Run every rule over the window; pure function of the log content."""
        lines = self.window(now - window_s)
        events: list[FaultEvent] = []
        for rule in self.rules:
            rx = re.compile(rule.pattern)
            counts: dict[str, int] = {}
            for ln in lines:
                if rule.level is not None and ln.level != rule.level:
                    continue
                if not rx.search(ln.message):
                    continue
                subject = rule.fixed_subject or ln.subject
                counts[subject] = counts.get(subject, 0) + 1
            for subject in sorted(counts):
                if counts[subject] >= rule.threshold:
                    events.append(FaultEvent(
                        station=self.station, layer=rule.layer, severity=rule.severity,
                        subject=subject, occurred_at=now,
                        detail=f"log rule {rule.name}: {counts[subject]} matches "
                               f"in {window_s:.0f}s"))
        return events

    def render(self) -> str:
        return "\n".join(ln.render() for ln in self.lines)
