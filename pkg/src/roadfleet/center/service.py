"""Management center facade: frame handling, planning, decisions, summary.

One ManagementCenter serves the whole fleet. Requests are spread over the
worker pool round-robin; workers are interchangeable because every effect
goes through the shared FleetStore.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .. import wire
from ..errors import NoWorkerAvailable, UnknownStation
from ..model import Activation, FaultEvent, RegionClass, Version
from .balancer import WorkerPool
from .faults import CentralDecision, DecisionKind
from .planner import (Action, DesiredState, ReportedState, action_from_dict,
                      action_to_dict, compute_actions)
from .store import FleetStore, Liveness, StationRecord

DEFAULT_WORKERS = ("w1", "w2", "w3")

STRATEGY_LEVELS = ("RESTART_FUNCTION", "RESTART_FRAMEWORK", "REINSTALL_PACKAGE",
                   "REBOOT_AGENT", "ESCALATE_TO_CENTER")


@dataclass
class FleetSummary:
    revision: int
    total: int
    liveness: dict[str, int]
    regions: dict[str, int]
    open_critical: int
    drift: int

    def to_dict(self) -> dict:
        return {
            "revision": self.revision,
            "total": self.total,
            "liveness": self.liveness,
            "regions": self.regions,
            "open_critical": self.open_critical,
            "drift": self.drift,
        }


@dataclass
class PingProbe:
    station: str
    token: int
    sent_at: float


class ManagementCenter:
    def __init__(self, store: FleetStore | None = None,
                 workers: tuple[str, ...] = DEFAULT_WORKERS,
                 send_to_station: Callable[[str, bytes], None] | None = None,
                 now: Callable[[], float] = lambda: 0.0,
                 trace: Callable[..., None] | None = None):
        self.store = store or FleetStore()
        self.pool = WorkerPool(list(workers))
        self.send_to_station = send_to_station or (lambda station, blob: None)
        self.now = now
        self.trace = trace or (lambda *a, **k: None)
        self.open_criticals: set[tuple[str, str]] = set()  # (station, subject)
        self.ping_rtts: list[float] = []
        self._pending_pings: dict[int, PingProbe] = {}
        self._ping_token = 0
        self.frames_received = 0
        self.frames_unroutable = 0
        self.reports_processed = 0
        # hook(station, pending_action_count) after each REPORT lands
        self.on_report_processed: Callable[[str, int], None] | None = None

    # -- high-level operations (used by API, CLI, harness) ---------------------

    def register_station(self, hardware_id: str, logical_id: str,
                         link_profile: str, region_class: RegionClass) -> StationRecord:
        self._take_worker()
        return self.store.register_station(hardware_id, logical_id,
                                           link_profile, region_class)

    def publish_package(self, blob: bytes) -> tuple[str, Version]:
        self._take_worker()
        key = self.store.repository.publish(blob)
        self.store.bump()
        return key

    def set_desired_config(self, logical_id: str, app_name: str,
                           entries: dict[str, str]) -> int:
        self._take_worker()
        return self.store.set_desired_config(logical_id, app_name, entries)

    def assign_package(self, logical_id: str, name: str, version: Version,
                       activation: Activation) -> DesiredState:
        self._take_worker()
        return self.store.assign_package(logical_id, name, version, activation)

    def actions_for(self, logical_id: str) -> list[Action]:
        record = self.store.station(logical_id)
        return compute_actions(record.desired, record.reported,
                               self.store.repository.depends_of)

    def ingest_fault(self, event: FaultEvent) -> CentralDecision:
        self._take_worker()
        decision = self.store.ingest_fault(event)
        self._apply_decision(event, decision)
        return decision

    def worker_failover(self, worker_id: str, healthy: bool) -> None:
        self.pool.set_health(worker_id, healthy)

    def order_strategy(self, logical_id: str, level: str, subject: str = "") -> None:
        """Operator-triggered strategy order, sent down as a DECISION frame."""
        if level not in STRATEGY_LEVELS:
            raise ValueError(f"unknown strategy level {level!r}")
        self.store.station(logical_id)
        self._take_worker()
        self._send(logical_id, wire.encode_frame(
            "DECISION", station=logical_id, directive="ORDER_STRATEGY",
            argument=level, subject=subject, operator=True))
        self.store.bump()

    def reprovision(self, logical_id: str) -> None:
        """Wipe the station's reported state and order a local reset."""
        record = self.store.station(logical_id)
        record.reported = None
        self.store.bump()
        self._send(logical_id, wire.encode_frame(
            "DECISION", station=logical_id, directive="REPROVISION_STATION",
            argument="", subject=""))

    def ping(self, logical_id: str) -> int:
        self.store.station(logical_id)
        self._ping_token += 1
        token = self._ping_token
        self._pending_pings[token] = PingProbe(logical_id, token, self.now())
        self._send(logical_id, wire.encode_frame("PING", station=logical_id, token=token))
        return token

    def fleet_summary(self) -> FleetSummary:
        now = self.now()
        liveness = {l.value: 0 for l in Liveness}
        regions = {r.value: 0 for r in RegionClass}
        drift = 0
        for record in self.store.stations.values():
            liveness[record.liveness(now).value] += 1
            regions[record.identity.region_class.value] += 1
            if self.actions_for(record.identity.logical_id):
                drift += 1
        return FleetSummary(
            revision=self.store.revision,
            total=len(self.store.stations),
            liveness=liveness,
            regions=regions,
            open_critical=len(self.open_criticals),
            drift=drift,
        )

    # -- frame handling -----------------------------------------------------------

    def handle_frame(self, station: str, blob: bytes) -> None:
        """Process one inbound frame from a station link."""
        self.frames_received += 1
        try:
            self._take_worker()
        except NoWorkerAvailable:
            self.frames_unroutable += 1
            self.trace("CENTER_UNAVAILABLE", station=station)
            return
        frame = wire.decode_frame(blob)
        kind = frame["kind"]
        try:
            if kind == "HELLO":
                self._on_hello(station, frame)
            elif kind == "HEARTBEAT":
                self.store.record_heartbeat(station, self.now())
            elif kind == "REPORT":
                self._on_report(station, frame)
            elif kind == "FAULT":
                event = FaultEvent.from_dict(frame["event"])
                decision = self.store.ingest_fault(event)
                self._apply_decision(event, decision)
            elif kind == "PONG":
                self._on_pong(frame)
            elif kind == "PING":
                self._send(station, wire.encode_frame("PONG", station=station,
                                                      token=frame.get("token", 0)))
            # other kinds are center->station only; ignore them inbound
        except UnknownStation:
            self.trace("UNKNOWN_STATION", station=station, kind=kind)

    def _on_hello(self, station: str, frame: dict) -> None:
        record = self.store.station(station)
        record.agent_state = frame.get("state", "")
        self.store.record_heartbeat(station, self.now())
        self.trace("HELLO", station=station, state=record.agent_state)

    def _on_report(self, station: str, frame: dict) -> None:
        reported = ReportedState.from_dict(frame.get("reported", {}))
        agent_state = frame.get("state", "")
        self.store.record_report(station, reported, self.now(), agent_state)
        self.reports_processed += 1
        if agent_state == "RUNNING" and not any(
                h == "FAULTED" for h in reported.health.values()):
            self.open_criticals = {(s, subj) for (s, subj) in self.open_criticals
                                   if s != station}
        actions = self.actions_for(station)
        if actions:
            self._send(station, wire.encode_frame(
                "ACTIONS", station=station,
                actions=[action_to_dict(a) for a in actions],
                revision=self.store.revision))
            self.trace("ACTIONS_SENT", station=station, count=len(actions))
        if self.on_report_processed is not None:
            self.on_report_processed(station, len(actions))

    def _on_pong(self, frame: dict) -> None:
        probe = self._pending_pings.pop(frame.get("token", -1), None)
        if probe is not None:
            self.ping_rtts.append(self.now() - probe.sent_at)

    def _apply_decision(self, event: FaultEvent, decision: CentralDecision) -> None:
        for directive in decision.directives:
            if directive.kind is DecisionKind.QUARANTINE_FUNCTION:
                record = self.store.station(event.station)
                assignment = record.desired.assignments.get(directive.argument)
                if assignment is not None:
                    record.desired.assignments[directive.argument] = type(assignment)(
                        assignment.version, Activation.INACTIVE)
                    self.store.bump()
                self._send(event.station, wire.encode_frame(
                    "DECISION", station=event.station,
                    directive="QUARANTINE_FUNCTION", argument=directive.argument,
                    subject=directive.argument))
            elif directive.kind is DecisionKind.ORDER_STRATEGY:
                self._send(event.station, wire.encode_frame(
                    "DECISION", station=event.station, directive="ORDER_STRATEGY",
                    argument=directive.argument, subject=event.subject))
            elif directive.kind is DecisionKind.REPROVISION_STATION:
                self.reprovision(event.station)
            elif directive.kind is DecisionKind.NOTIFY_OPERATOR:
                self.store.notify_operator(decision.rationale, event.station, self.now())
            # ACK_LOGGED: the log entry itself is the whole effect
        if event.severity.value == "CRITICAL":
            self.open_criticals.add((event.station, event.subject))
        self.trace("DECISION", station=event.station,
                   kinds=",".join(k.value for k in decision.kinds))

    # -- internals ------------------------------------------------------------------

    def _take_worker(self) -> str:
        return self.pool.dispatch()

    def _send(self, station: str, blob: bytes) -> None:
        self.send_to_station(station, blob)
