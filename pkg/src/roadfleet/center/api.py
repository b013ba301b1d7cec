"""HTTP management API over a live simulated fleet.

Every response carries the store's monotone revision number, which is what
lets polling clients discard stale reads. The API mutates only through the
center facade; in serve mode a ticker thread advances the virtual clock in
wall time.
"""

from __future__ import annotations

import threading
import time

from fastapi import FastAPI, HTTPException, Request

from ..errors import (DependencyUnsatisfiable, DuplicateVersionConflict,
                      HardwareIdInUse, MalformedArchive, MalformedManifest,
                      UnknownPackage, UnknownStation)
from ..model import Activation, FaultLayer, RegionClass, Severity, Version
from .planner import action_to_dict
from .service import STRATEGY_LEVELS


class LiveSimulation:
    """A harness plus the lock and ticker that let HTTP sessions share it."""

    def __init__(self, harness, timescale: float = 1.0, tick_wall_s: float = 0.1):
        self.harness = harness
        self.timescale = timescale
        self.tick_wall_s = tick_wall_s
        self.lock = threading.RLock()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    @property
    def center(self):
        return self.harness.center

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(target=self._tick_loop, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
            self._thread = None

    def _tick_loop(self) -> None:
        while not self._stop.wait(self.tick_wall_s):
            with self.lock:
                target = self.harness.clock.now + self.tick_wall_s * self.timescale
                self.harness.clock.advance(target)

    def register_station(self, hardware_id: str, logical_id: str,
                         link: str, region: RegionClass):
        """Register and, for brand-new logical ids, spawn a live agent."""
        with self.lock:
            known = logical_id in self.harness.agents
            record = self.center.register_station(hardware_id, logical_id,
                                                  link, region)
            if not known:
                self.harness._spawn_agent(logical_id, hardware_id, region, link,
                                          boot_at=self.harness.clock.now + 0.5)
            return record


def _station_view(sim: LiveSimulation, record) -> dict:
    now = sim.harness.clock.now
    logical = record.identity.logical_id
    actions = sim.center.actions_for(logical)
    open_faults = sum(1 for (s, _) in sim.center.open_criticals if s == logical)
    return {
        "logical_id": logical,
        "hardware_id": record.identity.hardware_id,
        "link_profile": record.identity.link_profile,
        "region_class": record.identity.region_class.value,
        "liveness": record.liveness(now).value,
        "last_heartbeat": record.last_heartbeat,
        "agent_state": record.agent_state,
        "drift": len(actions),
        "open_faults": open_faults,
    }


def create_app(sim: LiveSimulation) -> FastAPI:
    app = FastAPI(title="roadfleet management api")
    center = sim.center

    def enveloped(**payload) -> dict:
        return {"revision": center.store.revision, **payload}

    def fail(status: int, exc: Exception):
        raise HTTPException(status_code=status, detail=str(exc))

    @app.get("/fleet")
    def fleet():
        with sim.lock:
            stations = [_station_view(sim, rec)
                        for _, rec in sorted(center.store.stations.items())]
            return enveloped(stations=stations)

    @app.get("/summary")
    def summary():
        with sim.lock:
            return enveloped(summary=center.fleet_summary().to_dict(),
                             notifications=center.store.notifications[-20:],
                             virtual_time=sim.harness.clock.now)

    @app.get("/stations/{logical_id}")
    def station_detail(logical_id: str):
        with sim.lock:
            try:
                record = center.store.station(logical_id)
            except UnknownStation as exc:
                fail(404, exc)
            reported = record.reported.to_dict() if record.reported is not None else None
            return enveloped(
                station=_station_view(sim, record),
                desired=record.desired.to_dict(),
                reported=reported)

    @app.post("/stations", status_code=201)
    def register_station(body: dict):
        try:
            region = RegionClass(body["region_class"])
            record = sim.register_station(body["hardware_id"], body["logical_id"],
                                          body.get("link_profile", "XDSL"), region)
        except KeyError as exc:
            fail(400, exc)
        except (ValueError, HardwareIdInUse) as exc:
            fail(409 if isinstance(exc, HardwareIdInUse) else 400, exc)
        return enveloped(station=_station_view(sim, record))

    @app.put("/stations/{logical_id}/config/{app_name}")
    def put_config(logical_id: str, app_name: str, body: dict):
        entries = body.get("entries", body)
        if not isinstance(entries, dict):
            fail(400, ValueError("entries must be an object"))
        with sim.lock:
            try:
                version = center.set_desired_config(
                    logical_id, app_name,
                    {str(k): str(v) for k, v in entries.items()})
            except UnknownStation as exc:
                fail(404, exc)
            return enveloped(app=app_name, version=version)

    @app.post("/packages", status_code=201)
    async def publish_package(request: Request):
        blob = await request.body()
        with sim.lock:
            try:
                name, version = center.publish_package(blob)
            except (MalformedArchive, MalformedManifest) as exc:
                fail(400, exc)
            except DuplicateVersionConflict as exc:
                fail(409, exc)
            return enveloped(name=name, version=str(version))

    @app.post("/stations/{logical_id}/assignments")
    def assign(logical_id: str, body: dict):
        with sim.lock:
            try:
                desired = center.assign_package(
                    logical_id, body["name"], Version.parse(body["version"]),
                    Activation(body.get("activation", "ACTIVE")))
            except UnknownStation as exc:
                fail(404, exc)
            except UnknownPackage as exc:
                fail(404, exc)
            except DependencyUnsatisfiable as exc:
                fail(409, exc)
            except (KeyError, ValueError, MalformedManifest) as exc:
                fail(400, exc)
            return enveloped(desired=desired.to_dict())

    @app.get("/stations/{logical_id}/actions")
    def actions(logical_id: str):
        with sim.lock:
            try:
                pending = center.actions_for(logical_id)
            except UnknownStation as exc:
                fail(404, exc)
            return enveloped(actions=[action_to_dict(a) for a in pending])

    @app.get("/faults")
    def faults(station: str | None = None, since: int = -1,
               layer: str | None = None, severity: str | None = None):
        with sim.lock:
            try:
                layer_f = FaultLayer(layer) if layer else None
                severity_f = Severity(severity) if severity else None
            except ValueError as exc:
                fail(400, exc)
            entries = center.store.faults.query(
                station=station, since_seq=since, layer=layer_f,
                severity=severity_f)
            cursor = entries[-1].seq if entries else max(since, -1)
            return enveloped(
                cursor=cursor,
                events=[{"seq": e.seq, **e.event.to_dict(),
                         "decision": e.decision.to_dict()} for e in entries])

    @app.post("/stations/{logical_id}/strategy")
    def strategy(logical_id: str, body: dict):
        level = body.get("level", "")
        if level not in STRATEGY_LEVELS:
            fail(400, ValueError(f"unknown strategy level {level!r}"))
        with sim.lock:
            try:
                center.order_strategy(logical_id, level, body.get("subject", ""))
            except UnknownStation as exc:
                fail(404, exc)
            return enveloped(ordered=level, station=logical_id)

    @app.get("/profiles")
    def profiles():
        from ..model import builtin_link_profiles
        return enveloped(profiles=[{
            "name": p.name, "bandwidth": p.bandwidth, "delay_ms": p.delay_ms,
            "loss_rate": p.loss_rate} for p in builtin_link_profiles()])

    return app
