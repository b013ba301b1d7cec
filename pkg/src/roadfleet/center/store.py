"""Replicated fleet store: station records, configs, repo, fault log.

Modeled as one logical store with a single serialized writer; workers share
it, which is what makes worker failover invisible to callers. Snapshots are
a JSON document with a trailing digest line and restore to an
observationally equal store.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum

from ..archive import build_archive
from ..errors import (CorruptSnapshot, DependencyUnsatisfiable, HardwareIdInUse,
                      UnknownPackage, UnknownStation)
from ..model import (Activation, ConfigSet, FaultEvent, RegionClass,
                     StationIdentity, Version)
from .faults import CentralDecision, DecisionKind, Directive, FaultLog, FaultLogEntry
from .planner import Assignment, DesiredState, ReportedState
from .repository import PackageRepository

HEARTBEAT_INTERVAL_S = 10.0
SUSPECT_AFTER_MISSED = 2
OFFLINE_AFTER_MISSED = 6


class Liveness(str, Enum):
    ONLINE = "ONLINE"
    SUSPECT = "SUSPECT"
    OFFLINE = "OFFLINE"


@dataclass
class StationRecord:
    identity: StationIdentity
    desired: DesiredState = field(default_factory=DesiredState)
    reported: ReportedState | None = None  # None == ABSENT
    last_heartbeat: float | None = None
    agent_state: str = ""  # last self-declared lifecycle state, informational

    def liveness(self, now: float,
                 interval: float = HEARTBEAT_INTERVAL_S) -> Liveness:
        if self.last_heartbeat is None:
            return Liveness.OFFLINE
        gap = now - self.last_heartbeat
        if gap <= interval * SUSPECT_AFTER_MISSED:
            return Liveness.ONLINE
        if gap <= interval * OFFLINE_AFTER_MISSED:
            return Liveness.SUSPECT
        return Liveness.OFFLINE


@dataclass
class FleetStore:
    stations: dict[str, StationRecord] = field(default_factory=dict)
    repository: PackageRepository = field(default_factory=PackageRepository)
    faults: FaultLog = field(default_factory=FaultLog)
    notifications: list[dict] = field(default_factory=list)  # operator inbox
    revision: int = 0

    def bump(self) -> int:
        self.revision += 1
        return self.revision

    # -- stations ------------------------------------------------------------

    def station(self, logical_id: str) -> StationRecord:
        try:
            return self.stations[logical_id]
        except KeyError:
            raise UnknownStation(logical_id) from None

    def register_station(self, hardware_id: str, logical_id: str,
                         link_profile: str, region_class: RegionClass) -> StationRecord:
        """New station, or hardware replacement for an existing logical id.

        On replacement the desired state survives verbatim and the reported
        state resets, which forces full reprovisioning at the next round.
        """
        for rec in self.stations.values():
            if (rec.identity.hardware_id == hardware_id
                    and rec.identity.logical_id != logical_id):
                raise HardwareIdInUse(
                    f"{hardware_id} is bound to {rec.identity.logical_id}")
        identity = StationIdentity(logical_id, hardware_id, link_profile, region_class)
        existing = self.stations.get(logical_id)
        if existing is None:
            record = StationRecord(identity=identity)
            self.stations[logical_id] = record
            self.bump()
            return record
        if existing.identity.hardware_id == hardware_id:
            return existing  # idempotent re-registration
        existing.identity = identity
        existing.reported = None
        existing.last_heartbeat = None
        existing.agent_state = ""
        self.bump()
        return existing

    def set_desired_config(self, logical_id: str, app_name: str,
                           entries: dict[str, str]) -> int:
        record = self.station(logical_id)
        previous = record.desired.configs.get(app_name)
        version = 1 if previous is None else previous.version + 1
        record.desired.configs[app_name] = ConfigSet(app_name, version, dict(entries))
        self.bump()
        return version

    def record_report(self, logical_id: str, reported: ReportedState,
                      now: float, agent_state: str = "") -> StationRecord:
        record = self.station(logical_id)
        record.reported = reported
        record.last_heartbeat = now
        if agent_state:
            record.agent_state = agent_state
        self.bump()
        return record

    def record_heartbeat(self, logical_id: str, now: float) -> StationRecord:
        record = self.station(logical_id)
        record.last_heartbeat = now
        self.bump()
        return record

    def ingest_fault(self, event: FaultEvent) -> CentralDecision:
        self.station(event.station)  # UnknownStation guard
        decision = self.faults.ingest(event)
        self.bump()
        return decision

    def notify_operator(self, message: str, station: str, at: float) -> None:
        self.notifications.append({"at": at, "station": station, "message": message})
        self.bump()

    # -- snapshot / restore ----------------------------------------------------

    def snapshot(self) -> bytes:
        doc = {
            "revision": self.revision,
            "stations": {
                lid: {
                    "identity": {
                        "logical_id": rec.identity.logical_id,
                        "hardware_id": rec.identity.hardware_id,
                        "link_profile": rec.identity.link_profile,
                        "region_class": rec.identity.region_class.value,
                    },
                    "desired": rec.desired.to_dict(),
                    "reported": rec.reported.to_dict() if rec.reported is not None else None,
                    "last_heartbeat": rec.last_heartbeat,
                    "agent_state": rec.agent_state,
                }
                for lid, rec in sorted(self.stations.items())
            },
            "repository": [
                {
                    "manifest": archive.manifest.to_dict(),
                    "payload": {path: base64.b64encode(data).decode("ascii")
                                for path, data in sorted(archive.payload.items())},
                }
                for archive in self.repository.entries()
            ],
            "faults": [
                {"seq": e.seq, "event": e.event.to_dict(), "decision": e.decision.to_dict()}
                for e in self.faults.entries
            ],
            "notifications": list(self.notifications),
        }
        body = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
        digest = hashlib.sha256(body).hexdigest()
        return body + b"\nsha256:" + digest.encode("ascii") + b"\n"

    @classmethod
    def restore(cls, blob: bytes) -> FleetStore:
        try:
            body, digest_line, _ = blob.rsplit(b"\n", 2)
        except ValueError:
            raise CorruptSnapshot("snapshot is missing its digest line") from None
        if not digest_line.startswith(b"sha256:"):
            raise CorruptSnapshot("snapshot digest line is malformed")
        recorded = digest_line[len(b"sha256:"):].decode("ascii", "replace")
        actual = hashlib.sha256(body).hexdigest()
        if recorded != actual:
            raise CorruptSnapshot(f"digest mismatch: recorded {recorded[:12]}..., "
                                  f"actual {actual[:12]}...")
        doc = json.loads(body.decode("utf-8"))

        store = cls()
        store.revision = doc["revision"]
        for lid, raw in doc["stations"].items():
            ident = raw["identity"]
            record = StationRecord(
                identity=StationIdentity(
                    ident["logical_id"], ident["hardware_id"], ident["link_profile"],
                    RegionClass(ident["region_class"])),
                desired=DesiredState.from_dict(raw["desired"]),
                reported=(ReportedState.from_dict(raw["reported"])
                          if raw["reported"] is not None else None),
                last_heartbeat=raw["last_heartbeat"],
                agent_state=raw.get("agent_state", ""),
            )
            store.stations[lid] = record
        for raw in doc["repository"]:
            manifest = raw["manifest"]
            payload = {path: base64.b64decode(data)
                       for path, data in raw["payload"].items()}
            store.repository.publish(build_archive(
                {k: v for k, v in manifest.items() if k != "payload_digest"}, payload))
        for raw in doc["faults"]:
            decision = CentralDecision(
                directives=tuple(Directive(DecisionKind(d["kind"]), d.get("argument", ""))
                                 for d in raw["decision"]["directives"]),
                rationale=raw["decision"]["rationale"],
            )
            store.faults.entries.append(FaultLogEntry(
                raw["seq"], FaultEvent.from_dict(raw["event"]), decision))
        store.notifications = list(doc.get("notifications", []))
        return store

    # -- assignments --------------------------------------------------------

    def assign_package(self, logical_id: str, name: str, version: Version,
                       activation: Activation) -> DesiredState:
        """Record an assignment; ACTIVE pulls in its whole dependency closure.

        Missing dependencies are auto-assigned at the newest repository
        version satisfying the bound; an unsatisfiable bound aborts without
        touching the desired state.
        """
        record = self.station(logical_id)
        if not self.repository.has(name, version):
            raise UnknownPackage(f"{name} {version}")
        staged = dict(record.desired.assignments)
        staged[name] = Assignment(version, activation)

        if activation is Activation.ACTIVE:
            queue: list[tuple[str, Version]] = [(name, version)]
            seen: set[tuple[str, Version]] = set()
            while queue:
                pkg, ver = queue.pop(0)
                if (pkg, ver) in seen:
                    continue
                seen.add((pkg, ver))
                for dep_name, dep_min in self.repository.depends_of(pkg, ver):
                    current = staged.get(dep_name)
                    if current is not None and current.version >= dep_min:
                        queue.append((dep_name, current.version))
                        continue
                    chosen = self.repository.newest_satisfying(dep_name, dep_min)
                    if chosen is None:
                        raise DependencyUnsatisfiable(
                            dep_name,
                            f"{pkg} {ver} needs {dep_name} >= {dep_min}, "
                            f"repository has no such version")
                    staged[dep_name] = Assignment(chosen, Activation.ACTIVE)
                    queue.append((dep_name, chosen))

        record.desired.assignments = staged
        self.bump()
        return record.desired
