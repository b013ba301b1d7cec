"""Scenario execution: center + agents + fabric on one virtual clock.

Batch runs are single-threaded and deterministic per (scenario, seed);
serve mode advances the same harness from a wall-clock ticker.
"""

from __future__ import annotations

import time

from ..archive import build_archive, read_archive
from ..center import ManagementCenter
from ..errors import UnknownPackage, UnknownTarget
from ..model import (Activation, FaultLayer, MessageOrigin, MessageType,
                     Severity, StationIdentity, V2IMessage, Version, link_profile)
from ..agent import AgentConfig, StationAgent
from ..agent.station import AgentTransport
from ..netsim import Fabric, TraceLog, TrafficClass, VirtualClock
from . import metrics
from .behaviors import make_behavior
from .report import AssertOutcome, RunReport
from .scenario import Directive, Scenario

V2I_BRIDGE_ENVELOPE = 64  # framing overhead charged for bridged payloads


class SimulationHarness:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.clock = VirtualClock()
        self.trace = TraceLog(self.clock)
        self.fabric = Fabric(self.clock, seed=scenario.seed,
                             reserved_share=scenario.reserved_share,
                             trace=self.trace)
        self.center = ManagementCenter(
            workers=scenario.workers,
            send_to_station=self._center_send,
            now=lambda: self.clock.now,
            trace=self.trace)
        self.center.on_report_processed = self._track_convergence
        self.agents: dict[str, StationAgent] = {}
        self.archives: dict[tuple[str, Version], object] = {}
        self.convergence_times: dict[str, float | None] = {}
        self.assert_outcomes: list[AssertOutcome] = []
        self._v2i_seq = 0

        self.fabric.on_center_receive(self._on_center_receive)
        self._publish_packages()
        self._create_fleet()
        self._schedule_timeline()
        self._schedule_probes()

    # -- construction --------------------------------------------------------

    def _publish_packages(self) -> None:
        for pkg in self.scenario.packages:
            # deterministic payload bytes so digests are stable across runs
            payload = {"payload.bin": (pkg.name.encode() * 8)[:pkg.payload_size].ljust(
                pkg.payload_size, b".")}
            blob = build_archive(pkg.manifest_fields(), payload)
            self.center.publish_package(blob)
            archive = read_archive(blob)
            self.archives[(pkg.name, archive.manifest.version)] = archive

    def _create_fleet(self) -> None:
        for idx, (logical, hardware, region, link) in enumerate(
                self.scenario.station_plan()):
            self.center.register_station(hardware, logical, link, region)
            boot_at = 0.001 + idx * self.scenario.boot_stagger
            self._spawn_agent(logical, hardware, region, link, boot_at)

    def _spawn_agent(self, logical: str, hardware: str, region, link: str,
                     boot_at: float) -> StationAgent:
        profile = link_profile(link)
        self.fabric.attach_station(logical, profile)
        transport = AgentTransport(
            send_mgmt=lambda blob, s=logical: self.fabric.send_to_center(
                s, len(blob), blob, TrafficClass.management()),
            # opaque function payloads ride their own stream, never the
            # management frame decoder
            send_function=lambda app, nbytes, s=logical: self.fabric.send_to_center(
                s, nbytes, None, TrafficClass.function(app), stream="load"),
            link_up=lambda s=logical: not self.fabric.is_station_down(s),
        )
        agent = StationAgent(
            StationIdentity(logical, hardware, link, region),
            self.clock, transport, self._archive_source,
            config=AgentConfig(neighbor_count=self.scenario.neighbor_count),
            trace=self.trace)
        agent.set_behavior_factory(make_behavior)
        for pkg in self.scenario.packages:
            if pkg.behavior:
                agent.register_behavior_spec(pkg.name, pkg.behavior)
            if pkg.quota.get("bandwidth_up"):
                self.fabric.set_app_rate(logical, pkg.name, pkg.quota["bandwidth_up"])
        self.fabric.on_station_receive(
            logical, lambda stream, payload, size, s=logical: self._on_station_receive(
                s, stream, payload, size))
        self.agents[logical] = agent
        self.clock.schedule(boot_at, agent.boot)
        return agent

    def _archive_source(self, name: str, version: Version):
        try:
            return self.archives[(name, version)]
        except KeyError:
            raise UnknownPackage(f"{name} {version}") from None

    def _schedule_timeline(self) -> None:
        for directive in self.scenario.timeline:
            self.clock.schedule(directive.at, self._execute, directive)

    def _schedule_probes(self) -> None:
        if self.scenario.ping_interval <= 0:
            return
        targets = list(self.scenario.ping_stations) or self.scenario.station_ids()

        def probe():
            for station in targets:
                if station in self.agents:
                    self.center.ping(station)
            if self.clock.now + self.scenario.ping_interval <= self.scenario.duration:
                self.clock.schedule_in(self.scenario.ping_interval, probe)

        self.clock.schedule(self.scenario.ping_interval, probe)

    # -- routing ----------------------------------------------------------------

    def _center_send(self, station: str, blob: bytes) -> None:
        if not self.fabric.has_station(station):
            return
        try:
            self.fabric.send_to_station(station, len(blob), blob,
                                        TrafficClass.management())
        except Exception:
            self.trace("CENTER_SEND_FAILED", station=station)

    def _on_center_receive(self, station: str, stream: str, payload, size: int) -> None:
        if stream == "wire":
            self.center.handle_frame(station, payload)

    def _on_station_receive(self, station: str, stream: str, payload, size: int) -> None:
        agent = self.agents.get(station)
        if agent is None:
            return
        if stream == "wire":
            agent.on_frame(payload)
        elif stream == "v2i":
            agent.on_v2i_payload(payload)

    def _track_convergence(self, station: str, pending_actions: int) -> None:
        if pending_actions == 0:
            self.convergence_times.setdefault(station, self.clock.now)
        else:
            self.convergence_times.pop(station, None)

    # -- directives ----------------------------------------------------------------

    def _stations_of(self, params: dict) -> list[str]:
        target = params.get("station", "all")
        if target == "all":
            return sorted(self.agents)
        if target not in self.agents:
            raise UnknownTarget(target)
        return [target]

    def _execute(self, directive: Directive) -> None:
        self.trace("DIRECTIVE", directive=directive.kind,
                   station=directive.params.get("station", "-"))
        handler = {
            "ASSIGN": self._do_assign,
            "CONFIGURE": self._do_configure,
            "INJECT_FAULT": self._do_inject,
            "KILL_WORKER": self._do_kill_worker,
            "REPLACE_HARDWARE": self._do_replace_hardware,
            "POST_V2I": self._do_post_v2i,
            "SET_CHANNEL_LOAD": self._do_set_channel_load,
            "ASSERT": self._do_assert,
        }[directive.kind]
        handler(directive.params)

    def _do_assign(self, params: dict) -> None:
        version = Version.parse(str(params.get("version", "1.0.0")))
        activation = params.get("activation", "ACTIVE")
        for station in self._stations_of(params):
            self.center.assign_package(station, params["package"], version,
                                       Activation(activation))

    def _do_configure(self, params: dict) -> None:
        entries = {str(k): str(v) for k, v in params.get("entries", {}).items()}
        for station in self._stations_of(params):
            self.center.set_desired_config(station, params["app"], entries)

    def _do_inject(self, params: dict) -> None:
        layer = FaultLayer(params.get("layer", "FUNCTION"))
        severity = Severity(params.get("severity", "ERROR"))
        subject = params.get("subject", "")
        repeat = int(params.get("repeat", 1))
        spacing = float(params.get("spacing", 0.0))
        duration = float(params.get("duration", 30.0))
        for station in self._stations_of(params):
            agent = self.agents[station]
            if layer is FaultLayer.FUNCTION:
                if params.get("install_corrupt"):
                    # every install of `subject` fails; repeat -1 means forever
                    agent.inject.install_fail_budget[subject] = repeat
                elif spacing > 0 and repeat > 1:
                    for i in range(repeat):
                        self.clock.schedule(self.clock.now + i * spacing,
                                            agent.inject_function_fault, subject, 1)
                else:
                    agent.inject_function_fault(subject, repeat)
            elif layer is FaultLayer.FRAMEWORK:
                phase = params.get("phase")
                if phase:
                    agent.inject.boot_failures.add(phase)
                else:
                    agent.framework.mark_faulted()
                    agent.report_fault(layer, severity, subject or "framework",
                                       "injected framework fault")
            elif layer is FaultLayer.OS:
                phase = params.get("phase")
                if phase:
                    agent.inject.boot_failures.add(phase)
                else:
                    agent.report_fault(layer, severity, subject or "os",
                                       "injected OS fault")
            elif layer is FaultLayer.NETWORK:
                self.fabric.set_station_down(station, True)
                agent.log.write(self.clock.now, "WARNING", "uplink", "link down")
                self.clock.schedule(self.clock.now + duration,
                                    self.fabric.set_station_down, station, False)
            elif layer is FaultLayer.DATA_COLLECTION:
                agent.inject.collection_paused = True
                self.clock.schedule(self.clock.now + duration,
                                    self._resume_collection, station)

    def _resume_collection(self, station: str) -> None:
        agent = self.agents.get(station)
        if agent is not None:
            agent.inject.collection_paused = False

    def _do_kill_worker(self, params: dict) -> None:
        self.center.worker_failover(params["worker"], bool(params.get("healthy", False)))

    def _do_replace_hardware(self, params: dict) -> None:
        for station in self._stations_of(params):
            self.replace_hardware(station, params["hardware"])

    def replace_hardware(self, station: str, new_hardware: str,
                         provisioning_delay: float = 1.0) -> StationAgent:
        """Swap the physical unit behind a logical station id."""
        old = self.agents.pop(station, None)
        if old is not None:
            old._cancel_timers()
            for name in list(old._running_behaviors):
                old._stop_behavior(name)
        record = self.center.store.station(station)
        region = record.identity.region_class
        link = record.identity.link_profile
        self.center.register_station(new_hardware, station, link, region)
        agent = self._spawn_agent(station, new_hardware, region, link,
                                  boot_at=self.clock.now + provisioning_delay)
        self.trace("REPLACE_HARDWARE", station=station, hardware=new_hardware)
        return agent

    def _do_post_v2i(self, params: dict) -> None:
        stations = params.get("stations") or self._stations_of(params)
        origin = MessageOrigin(params.get("origin", "CENTER"))
        for station in stations:
            self._v2i_seq += 1
            now = self.clock.now
            message = V2IMessage(
                msg_id=f"v2i-{self._v2i_seq:05d}",
                msg_type=MessageType(params.get("msg_type", "SERVICE")),
                priority=int(params.get("priority", 100)),
                size=int(params.get("size", 128)),
                created_at=now,
                expiry=now + float(params.get("ttl", 10.0)),
                redundancy=int(params.get("redundancy", 1)),
                origin=origin)
            if origin is MessageOrigin.VEHICLE:
                # relayed from the radio side; no center link involved
                agent = self.agents.get(station)
                if agent is not None:
                    agent.on_v2i_payload(message)
            else:
                self.bridge_center_to_v2i(message, station)

    def bridge_center_to_v2i(self, message: V2IMessage, station: str) -> None:
        """Hand a center-originated payload to one station's broadcast buffer.

        Fire-and-forget by design: the center-side call never fails on
        buffer conditions at the station.
        """
        if not self.fabric.has_station(station):
            return
        self.fabric.send_to_station(
            station, message.size + V2I_BRIDGE_ENVELOPE, message,
            TrafficClass.function("v2i-bridge"), stream="v2i")

    def _do_set_channel_load(self, params: dict) -> None:
        load = float(params.get("load", 0.0))
        for station in self._stations_of(params):
            self.agents[station].channel_load = load
            if "neighbors" in params:
                self.agents[station].neighbor_count = int(params["neighbors"])

    def _do_assert(self, params: dict) -> None:
        passed, actual = metrics.check(self, params)
        outcome = AssertOutcome(
            at=self.clock.now, metric=params["metric"],
            op=params.get("op", "=="), expected=params["value"],
            actual=actual, passed=passed)
        self.assert_outcomes.append(outcome)
        self.trace("ASSERT", metric=params["metric"],
                   result="PASS" if passed else "FAIL")

    # -- running -----------------------------------------------------------------

    def advance(self, until: float) -> None:
        self.clock.advance(until)

    def run(self) -> RunReport:
        started = time.monotonic()
        self.clock.advance(self.scenario.duration)
        wall = time.monotonic() - started
        return self.build_report(wall)

    def build_report(self, wall_seconds: float = 0.0) -> RunReport:
        summary = self.center.fleet_summary()
        drops = sum(links.up.dropped_frames + links.down.dropped_frames
                    for links in (self.fabric.links(s) for s in sorted(self.agents)))
        counters = {
            "frames_received": self.center.frames_received,
            "reports_processed": self.center.reports_processed,
            "frames_dropped": drops,
            "broadcasts": sum(len(a.broadcasts) for a in self.agents.values()),
            "pings_completed": len(self.center.ping_rtts),
            "dispatches": dict(sorted(self.center.pool.dispatch_counts.items())),
        }
        return RunReport(
            scenario=self.scenario.name,
            seed=self.scenario.seed,
            duration=self.scenario.duration,
            wall_seconds=wall_seconds,
            summary=summary.to_dict(),
            convergence_times={s: self.convergence_times.get(s)
                               for s in sorted(self.agents)},
            asserts=self.assert_outcomes,
            fault_count=len(self.center.store.faults.entries),
            trace_digest=self.trace.digest(),
            counters=counters,
        )
