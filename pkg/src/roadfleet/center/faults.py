"""Central fault aggregation and the decision table.

Every report lands in a durable log; the decision is a pure function of the
incoming event plus the station's recent history, so any decision can be
replayed from the logged stream alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..model import FaultEvent, FaultLayer, Severity

ERROR_ESCALATION_COUNT = 3
ERROR_WINDOW_S = 600.0  # ten minutes of virtual time


class DecisionKind(str, Enum):
    ACK_LOGGED = "ACK_LOGGED"
    ORDER_STRATEGY = "ORDER_STRATEGY"
    QUARANTINE_FUNCTION = "QUARANTINE_FUNCTION"
    REPROVISION_STATION = "REPROVISION_STATION"
    NOTIFY_OPERATOR = "NOTIFY_OPERATOR"


@dataclass(frozen=True)
class Directive:
    kind: DecisionKind
    argument: str = ""  # strategy level or function name, when applicable


@dataclass(frozen=True)
class CentralDecision:
    directives: tuple[Directive, ...]
    rationale: str

    @property
    def kinds(self) -> tuple[DecisionKind, ...]:
        return tuple(d.kind for d in self.directives)

    def to_dict(self) -> dict:
        return {
            "directives": [{"kind": d.kind.value, "argument": d.argument}
                           for d in self.directives],
            "rationale": self.rationale,
        }


@dataclass(frozen=True)
class FaultLogEntry:
    seq: int
    event: FaultEvent
    decision: CentralDecision


def decide(event: FaultEvent, history: list[FaultEvent]) -> CentralDecision:
    """Apply the escalation table to one event given the station's history.

    `history` holds earlier events from the same station, oldest first; the
    current event is not yet part of it.
    """
    if event.severity in (Severity.INFO, Severity.WARNING):
        return CentralDecision(
            (Directive(DecisionKind.ACK_LOGGED),),
            f"{event.severity.value} is logged only")

    if event.severity is Severity.ERROR:
        if event.ladder_exhausted:
            return CentralDecision(
                (Directive(DecisionKind.QUARANTINE_FUNCTION, event.subject),),
                "station exhausted its local recovery ladder")
        window_start = event.occurred_at - ERROR_WINDOW_S
        recent_same_subject = sum(
            1 for e in history
            if e.severity is Severity.ERROR and e.subject == event.subject
            and e.occurred_at >= window_start)
        if recent_same_subject + 1 >= ERROR_ESCALATION_COUNT:
            return CentralDecision(
                (Directive(DecisionKind.QUARANTINE_FUNCTION, event.subject),),
                f"{recent_same_subject + 1} errors on {event.subject!r} "
                f"within {ERROR_WINDOW_S:.0f}s")
        return CentralDecision(
            (Directive(DecisionKind.ACK_LOGGED),),
            "isolated error; station recovery is handling it")

    # CRITICAL
    if event.layer in (FaultLayer.OS, FaultLayer.NETWORK):
        return CentralDecision(
            (Directive(DecisionKind.REPROVISION_STATION),
             Directive(DecisionKind.NOTIFY_OPERATOR)),
            f"critical {event.layer.value} fault needs a rebuild and human eyes")
    # FUNCTION / FRAMEWORK / DATA_COLLECTION: restart the platform layer
    return CentralDecision(
        (Directive(DecisionKind.ORDER_STRATEGY, "RESTART_FRAMEWORK"),),
        f"critical {event.layer.value} fault; ordering a framework restart")


@dataclass
class FaultLog:
    """Append-only central store of fault events and their decisions."""

    entries: list[FaultLogEntry] = field(default_factory=list)

    def ingest(self, event: FaultEvent) -> CentralDecision:
        history = [e.event for e in self.entries if e.event.station == event.station]
        if history and event.occurred_at < history[-1].occurred_at:
            raise ValueError(
                f"fault stream for {event.station} went backwards: "
                f"{event.occurred_at} < {history[-1].occurred_at}")
        decision = decide(event, history)
        self.entries.append(FaultLogEntry(len(self.entries), event, decision))
        return decision

    def query(self, station: str | None = None, since_seq: int = -1,
              layer: FaultLayer | None = None,
              severity: Severity | None = None) -> list[FaultLogEntry]:
        out = []
        for entry in self.entries:
            if entry.seq <= since_seq:
                continue
            if station is not None and entry.event.station != station:
                continue
            if layer is not None and entry.event.layer is not layer:
                continue
            if severity is not None and entry.event.severity is not severity:
                continue
            out.append(entry)
        return out

    def replay_decisions(self) -> list[CentralDecision]:
        """Recompute every decision from the logged events alone."""
        per_station: dict[str, list[FaultEvent]] = {}
        out = []
        for entry in self.entries:
            history = per_station.setdefault(entry.event.station, [])
            out.append(decide(entry.event, history))
            history.append(entry.event)
        return out
