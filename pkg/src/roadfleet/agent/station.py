"""Station-side platform: supervised boot, reconciliation, local recovery.

One StationAgent is one event loop over the shared virtual clock. It speaks
the management frame protocol upward, applies action lists from the center,
watches its own three platform layers, and walks the strategy ladder when
functions misbehave. The management side keeps running whatever happens to
the function framework.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .. import wire
from ..archive import PackageArchive
from ..center.planner import (Activate, Configure, Deactivate, Install, Remove,
                              ReportedState, action_from_dict)
from ..errors import DigestMismatch, LinkDown, RoadfleetError
from ..framework import (FunctionFramework, FunctionState, ManagementFramework,
                         management_framework_alive)
from ..model import FaultEvent, FaultLayer, Severity, StationIdentity, Version
from ..netsim.sfbuffer import SfBuffer
from ..netsim.clock import VirtualClock
from .logbuf import LogBuffer
from .recovery import ESCALATE, LADDER_RUNGS, StrategyLadder, StrategyOutcome
from .storage import StationStorage
from .verify import (CHECK_SEVERITY, CheckContext, LocalCheckResult,
                     run_local_checks)

REFAULT_DELAY_S = 1.0  # a "recovered" function that is still broken re-faults this much later


class AgentState(str, Enum):
    OFFLINE = "OFFLINE"
    FAILED = "FAILED"  # OS never came up
    MANAGEMENT_ONLY = "MANAGEMENT_ONLY"
    RUNNING = "RUNNING"


class BootPhase(str, Enum):
    OS_BOOT = "OS_BOOT"
    FRAMEWORK_START = "FRAMEWORK_START"
    FUNCTIONS_START = "FUNCTIONS_START"
    RUNNING = "RUNNING"


@dataclass
class BootReport:
    phases: list[tuple[str, str]]
    final_state: AgentState
    fault_events: list[FaultEvent]


@dataclass
class AgentConfig:
    heartbeat_interval: float = 10.0
    verify_interval: float = 30.0
    collection_interval: float = 10.0
    distribution_period: float = 1.0
    backoff_base: float = 1.0
    backoff_cap: float = 60.0
    ladder_window: float = 600.0
    disk_capacity: int = 1_000_000_000
    sf_capacity: int = 64
    max_frames_per_tick: int = 10
    neighbor_count: int = 1


@dataclass
class AgentTransport:
    send_mgmt: Callable[[bytes], None]  # raises LinkDown when the link is down
    send_function: Callable[[str, int], None]
    link_up: Callable[[], bool]


@dataclass
class _Injections:
    """Scenario knobs that make the simulated station misbehave."""

    boot_failures: set[str] = field(default_factory=set)
    function_fault_budget: dict[str, int] = field(default_factory=dict)
    install_fail_budget: dict[str, int] = field(default_factory=dict)
    configure_fail_apps: set[str] = field(default_factory=set)
    clock_skewed: bool = False
    config_digest_bad: bool = False
    collection_paused: bool = False


class StationAgent:
    def __init__(self, identity: StationIdentity, clock: VirtualClock,
                 transport: AgentTransport,
                 archive_source: Callable[[str, Version], PackageArchive],
                 config: AgentConfig | None = None,
                 trace: Callable[..., None] | None = None):
        self.identity = identity
        self.clock = clock
        self.transport = transport
        self.archive_source = archive_source
        self.config = config or AgentConfig()
        self.trace = trace or (lambda *a, **k: None)

        self.state = AgentState.OFFLINE
        self.storage = StationStorage(disk_capacity=self.config.disk_capacity)
        self.framework = FunctionFramework(on_transition=self._on_framework_transition)
        self.mgmt_framework = ManagementFramework()
        self.ladder = StrategyLadder(window=self.config.ladder_window)
        self.log = LogBuffer(identity.logical_id)
        self.sf_buffer = SfBuffer(capacity=self.config.sf_capacity,
                                  max_frames_per_tick=self.config.max_frames_per_tick)
        self.inject = _Injections()

        self.quarantined: set[str] = set()
        self.channel_load = 0.0
        self.neighbor_count = self.config.neighbor_count
        self.last_collection_at = 0.0
        self.last_check_results: list[LocalCheckResult] = []
        self.boot_reports: list[BootReport] = []
        self.heartbeats_sent = 0
        self.broadcasts: list = []

        self._behavior_specs: dict[str, dict] = {}
        self._running_behaviors: dict[str, object] = {}
        self._behavior_factory: Callable[[str, dict, StationAgent], object] | None = None
        self._timers: list[int] = []
        self._retry_timer: int | None = None
        self._backoff_n = 0
        self._pending_frames: list[bytes] = []
        self._installed_digest_ok = True

    # ------------------------------------------------------------------ boot

    def boot(self, now: float | None = None,
             restore: list[str] | None = None) -> BootReport:
        now = self.clock.now if now is None else now
        phases: list[tuple[str, str]] = []
        events: list[FaultEvent] = []

        if "OS_BOOT" in self.inject.boot_failures:
            self.inject.boot_failures.discard("OS_BOOT")
            phases.append((BootPhase.OS_BOOT.value, "FAILED"))
            self.state = AgentState.FAILED
            self.mgmt_framework.os_alive = False
            report = BootReport(phases, self.state, events)
            self.boot_reports.append(report)
            self._log("ERROR", "os", "boot failed at OS_BOOT")
            return report
        phases.append((BootPhase.OS_BOOT.value, "OK"))
        self.mgmt_framework.os_alive = True
        self.last_collection_at = now

        framework_ok = "FRAMEWORK_START" not in self.inject.boot_failures
        if not framework_ok:
            self.inject.boot_failures.discard("FRAMEWORK_START")
            phases.append((BootPhase.FRAMEWORK_START.value, "FAILED"))
            phases.append((BootPhase.FUNCTIONS_START.value, "FAILED"))
            self.framework.mark_faulted()
            self.state = AgentState.MANAGEMENT_ONLY
            events.append(self._emit_fault(FaultLayer.FRAMEWORK, Severity.CRITICAL,
                                           "framework", "function framework failed to start",
                                           now=now, send=False))
        else:
            phases.append((BootPhase.FRAMEWORK_START.value, "OK"))
            self.framework.faulted = False
            fn_ok = True
            for name in self._restorable_functions(restore or []):
                try:
                    self._activate(name)
                except RoadfleetError as exc:
                    fn_ok = False
                    events.append(self._emit_fault(FaultLayer.FUNCTION, Severity.ERROR,
                                                   name, f"restart on boot failed: {exc}",
                                                   now=now, send=False))
            phases.append((BootPhase.FUNCTIONS_START.value, "OK" if fn_ok else "FAILED"))
            self.state = AgentState.RUNNING
            phases.append((BootPhase.RUNNING.value, "OK"))

        report = BootReport(phases, self.state, events)
        self.boot_reports.append(report)
        self._log("INFO", "os", f"boot complete, state {self.state.value}")
        self.trace("BOOT", station=self.identity.logical_id, state=self.state.value)

        self._send_or_queue(wire.encode_frame(
            "HELLO", station=self.identity.logical_id,
            hardware=self.identity.hardware_id, state=self.state.value))
        for event in report.fault_events:
            self._send_fault_frame(event)
        self._start_timers()
        return report

    def _restorable_functions(self, previously_active: list[str]) -> list[str]:
        return [n for n in previously_active
                if n in self.storage.packages and n not in self.quarantined]

    def _start_timers(self) -> None:
        self._cancel_timers()
        c = self.config
        self._timers = [
            self.clock.schedule_in(c.heartbeat_interval, self._heartbeat_timer),
            self.clock.schedule_in(c.verify_interval, self._verify_timer),
            self.clock.schedule_in(c.collection_interval, self._collection_timer),
            self.clock.schedule_in(c.distribution_period, self._distribution_timer),
        ]

    def _cancel_timers(self) -> None:
        for t in self._timers:
            self.clock.cancel(t)
        self._timers = []
        if self._retry_timer is not None:
            self.clock.cancel(self._retry_timer)
            self._retry_timer = None

    # --------------------------------------------------------------- heartbeat

    def _heartbeat_timer(self) -> None:
        self.heartbeat()

    def heartbeat(self, now: float | None = None) -> None:
        """Send a full REPORT; on a dead link, retry with exponential backoff."""
        if self.state in (AgentState.OFFLINE, AgentState.FAILED):
            return
        if self._retry_timer is not None:
            self.clock.cancel(self._retry_timer)
            self._retry_timer = None
        now = self.clock.now if now is None else now
        frame = wire.encode_frame(
            "REPORT", station=self.identity.logical_id, state=self.state.value,
            reported=self.build_reported().to_dict(),
            checks=[r.to_dict() for r in self.last_check_results])
        try:
            self.transport.send_mgmt(frame)
        except LinkDown:
            delay = min(self.config.backoff_base * (2 ** self._backoff_n),
                        self.config.backoff_cap)
            self._backoff_n += 1
            self._log("WARNING", "uplink", "link down, heartbeat retry scheduled")
            self._retry_timer = self.clock.schedule_in(delay, self._heartbeat_timer)
            return
        self._backoff_n = 0
        self._retry_timer = None
        self.heartbeats_sent += 1
        self._flush_pending()
        self._timers.append(
            self.clock.schedule_in(self.config.heartbeat_interval, self._heartbeat_timer))

    def build_reported(self) -> ReportedState:
        health = {}
        for name, handle in self.framework.handles.items():
            if handle.state is FunctionState.ACTIVE:
                health[name] = "RUNNING"
            elif handle.state is FunctionState.FAULTED:
                health[name] = "FAULTED"
            else:
                health[name] = "STOPPED"
        active = {n for n, h in self.framework.handles.items()
                  if h.state is FunctionState.ACTIVE}
        return ReportedState(
            installed=self.storage.installed_versions(),
            active=active,
            applied_config_versions=self.storage.applied_config_versions(),
            health=health,
        )

    # ----------------------------------------------------------------- frames

    def on_frame(self, blob: bytes) -> None:
        frame = wire.decode_frame(blob)
        kind = frame["kind"]
        if kind == "ACTIONS":
            self.reconcile(frame.get("actions", []))
        elif kind == "DECISION":
            self._on_decision(frame)
        elif kind == "PING":
            self._send_or_queue(wire.encode_frame(
                "PONG", station=self.identity.logical_id, token=frame.get("token", 0)))
        elif kind == "PONG":
            pass  # agent-initiated pings are not used by the reference loop

    def on_v2i_payload(self, message) -> None:
        """Center-to-vehicles payload bridged into the local broadcast buffer."""
        result = self.sf_buffer.enqueue(message, self.clock.now)
        if not result.accepted:
            # never a center-side failure; log and tell the center as a warning
            self._emit_fault(FaultLayer.NETWORK, Severity.WARNING, "v2i-buffer",
                             f"message {message.msg_id} rejected: {result.reason}")
        else:
            self.trace("V2I_ENQUEUED", station=self.identity.logical_id,
                       msg=message.msg_id)

    def _on_decision(self, frame: dict) -> None:
        directive = frame.get("directive", "")
        argument = frame.get("argument", "")
        subject = frame.get("subject", "") or argument
        self._log("INFO", "center", f"decision {directive} {argument}")
        if directive == "QUARANTINE_FUNCTION":
            self.quarantined.add(argument)
            handle = self.framework.handles.get(argument)
            if handle is not None and handle.state is FunctionState.ACTIVE:
                self.framework.set_state(argument, FunctionState.STOPPED)
            self._stop_behavior(argument)
        elif directive == "ORDER_STRATEGY":
            if argument in LADDER_RUNGS:
                self._apply_rung(argument, subject or "framework", self.clock.now,
                                 ordered_by_center=True)
        elif directive == "REPROVISION_STATION":
            self.reprovision()

    # ---------------------------------------------------------------- reconcile

    def reconcile(self, raw_actions: list[dict]) -> ReportedState:
        """Apply an action list in order; each action fails alone.

        A failed package poisons only its own later actions this round;
        convergence resumes next heartbeat when the center replans.
        """
        failed: set[str] = set()
        for raw in raw_actions:
            action = action_from_dict(raw)
            subject = getattr(action, "name", getattr(action, "app", ""))
            if subject in failed:
                continue
            try:
                if isinstance(action, Install):
                    self.install_package(action.name, action.version)
                elif isinstance(action, Remove):
                    self._remove(action.name)
                elif isinstance(action, Configure):
                    self._configure(action.app, action.config)
                elif isinstance(action, Activate):
                    self._activate(action.name)
                elif isinstance(action, Deactivate):
                    self._deactivate(action.name)
            except RoadfleetError as exc:
                failed.add(subject)
                self._emit_fault(FaultLayer.FUNCTION, Severity.ERROR, subject,
                                 f"{type(exc).__name__}: {exc}")
        self.trace("RECONCILED", station=self.identity.logical_id,
                   applied=len(raw_actions) - len(failed), failed=len(failed))
        return self.build_reported()

    def install_package(self, name: str, version: Version):
        """Fetch (out of band) and unpack one package; digest-verified."""
        budget = self.inject.install_fail_budget.get(name, 0)
        if budget != 0:  # negative budget == fails forever
            if budget > 0:
                self.inject.install_fail_budget[name] = budget - 1
            raise DigestMismatch(f"{name} {version} (injected corruption)")
        archive = self.archive_source(name, version)
        result = self.storage.install(archive)
        if name not in self.framework.handles:
            spec = self._behavior_specs.get(name, {})
            self.framework.register_function(archive.manifest,
                                             provides=spec.get("provides", ()),
                                             requires=spec.get("requires", ()))
        else:
            # version change re-registers the handle; activation state resets
            self._stop_behavior(name)
            self.framework.unregister(name)
            spec = self._behavior_specs.get(name, {})
            self.framework.register_function(archive.manifest,
                                             provides=spec.get("provides", ()),
                                             requires=spec.get("requires", ()))
        self._log("INFO", name, f"installed {name} {version}")
        return result

    def _remove(self, name: str) -> None:
        self._stop_behavior(name)
        self.framework.unregister(name)
        self.storage.remove(name)
        self._log("INFO", name, f"removed {name}")

    def _configure(self, app: str, config) -> None:
        if app in self.inject.configure_fail_apps:
            raise RoadfleetError(f"configure failed for {app} (injected)")
        self.storage.apply_config(config)
        self._log("INFO", app, f"applied config v{config.version}")
        behavior = self._running_behaviors.get(app)
        if behavior is not None and hasattr(behavior, "on_config"):
            behavior.on_config(config)

    def _activate(self, name: str) -> None:
        if self.framework.faulted:
            raise RoadfleetError(f"cannot activate {name}: function framework faulted")
        handle = self.framework.handles.get(name)
        if handle is None:
            raise RoadfleetError(f"cannot activate {name}: not installed")
        if handle.state is FunctionState.FAULTED:
            self.framework.set_state(name, FunctionState.RESOLVED)
        if handle.state is FunctionState.INSTALLED:
            self.framework.resolve(name)
        if handle.state is FunctionState.RESOLVED or handle.state is FunctionState.STOPPED:
            self.framework.set_state(name, FunctionState.ACTIVE)
        self._start_behavior(name)
        self._log("INFO", name, f"activated {name}")

    def _deactivate(self, name: str) -> None:
        handle = self.framework.handles.get(name)
        if handle is not None and handle.state is FunctionState.ACTIVE:
            self.framework.set_state(name, FunctionState.STOPPED)
        self._stop_behavior(name)
        self._log("INFO", name, f"deactivated {name}")

    # ------------------------------------------------------------ fault handling

    def _on_framework_transition(self, handle, new_state) -> None:
        if new_state is FunctionState.FAULTED:
            event = self._emit_fault(FaultLayer.FUNCTION, Severity.ERROR, handle.name,
                                     "function faulted", send=False)
            self.handle_fault(event)

    def inject_function_fault(self, subject: str, repeat: int = 1) -> None:
        """Scenario hook: fault a function now and `repeat - 1` more times
        after each recovery attempt."""
        self.inject.function_fault_budget[subject] = (
            self.inject.function_fault_budget.get(subject, 0) + max(repeat - 1, 0))
        handle = self.framework.handles.get(subject)
        if handle is None:
            event = self._emit_fault(FaultLayer.FUNCTION, Severity.ERROR, subject,
                                     "fault injected on unknown function", send=False)
            self.handle_fault(event)
            return
        self.framework.set_state(subject, FunctionState.FAULTED)

    def handle_fault(self, event: FaultEvent, now: float | None = None) -> StrategyOutcome:
        """Walk one rung of the recovery ladder for this event's subject."""
        now = self.clock.now if now is None else now
        rung, _ = self.ladder.advance(event.subject, now)
        return self._apply_rung(rung, event.subject, now, source_event=event)

    def _apply_rung(self, rung: str, subject: str, now: float,
                    source_event: FaultEvent | None = None,
                    ordered_by_center: bool = False) -> StrategyOutcome:
        recovered = False
        if rung == "RESTART_FUNCTION":
            recovered = self._restart_function(subject)
        elif rung == "RESTART_FRAMEWORK":
            recovered = self._restart_framework(subject)
        elif rung == "REINSTALL_PACKAGE":
            recovered = self._reinstall_package(subject)
        elif rung == "REBOOT_AGENT":
            recovered = self._reboot_for(subject)
        elif rung == ESCALATE:
            base = source_event or FaultEvent(
                station=self.identity.logical_id, layer=FaultLayer.FUNCTION,
                severity=Severity.ERROR, subject=subject, occurred_at=now)
            self._emit_fault(base.layer, base.severity, subject,
                             f"local recovery exhausted: {base.detail}",
                             ladder_exhausted=True, now=now)

        index = LADDER_RUNGS.index(rung)
        outcome = StrategyOutcome(subject=subject, rung=rung, rung_index=index,
                                  recovered=recovered, at=now)
        if not ordered_by_center:
            self.ladder.record(outcome)
        self._log("WARNING", subject, f"strategy {rung} applied (recovered={recovered})")
        self.trace("STRATEGY", station=self.identity.logical_id, subject=subject,
                   rung=rung)
        if rung != ESCALATE:
            # remediation notice; the raw severity only travels on escalation
            self._emit_fault(FaultLayer.FUNCTION, Severity.WARNING, subject,
                             f"applied strategy {rung}", now=now)
        return outcome

    def _consume_fault_budget(self, subject: str) -> bool:
        """True when the underlying fault is really gone."""
        remaining = self.inject.function_fault_budget.get(subject, 0)
        if remaining > 0:
            self.inject.function_fault_budget[subject] = remaining - 1
            self.clock.schedule_in(REFAULT_DELAY_S, self._refault, subject)
            return False
        return True

    def _refault(self, subject: str) -> None:
        handle = self.framework.handles.get(subject)
        if handle is not None and handle.state is FunctionState.ACTIVE:
            self.framework.set_state(subject, FunctionState.FAULTED)

    def _restart_function(self, subject: str) -> bool:
        if subject in ("framework", "data-collection", "uplink"):
            return self._restart_component(subject)
        handle = self.framework.handles.get(subject)
        if handle is None:
            return False
        if handle.state is FunctionState.FAULTED:
            self.framework.set_state(subject, FunctionState.RESOLVED)
        if handle.state is FunctionState.RESOLVED:
            self.framework.set_state(subject, FunctionState.ACTIVE)
        elif handle.state is FunctionState.STOPPED:
            self.framework.set_state(subject, FunctionState.ACTIVE)
        return self._consume_fault_budget(subject)

    def _restart_component(self, subject: str) -> bool:
        if subject == "data-collection":
            self.inject.collection_paused = False
            self.last_collection_at = self.clock.now
            return True
        if subject == "framework":
            return self._restart_framework(subject)
        return True

    def _restart_framework(self, subject: str) -> bool:
        was_active = self.framework.restart()
        ok = True
        for name in was_active:
            if name in self.quarantined:
                continue
            try:
                self._activate(name)
            except RoadfleetError:
                ok = False
        ok = self._revive_subject(subject) and ok
        if subject in self.framework.handles:
            return self._consume_fault_budget(subject) and ok
        return ok

    def _reinstall_package(self, subject: str) -> bool:
        cached = self.storage.archive_cache.get(subject)
        if cached is None:
            return False
        self.storage.packages.pop(subject, None)
        self.storage.install(cached)
        try:
            self._activate(subject)
        except RoadfleetError:
            return False
        return self._consume_fault_budget(subject)

    def _reboot_for(self, subject: str) -> bool:
        self.reboot()
        # the reboot is remediation for this subject: bring it back too
        self._revive_subject(subject)
        return self._consume_fault_budget(subject)

    def _revive_subject(self, subject: str) -> bool:
        if subject in self.quarantined or subject not in self.framework.handles:
            return True
        try:
            self._activate(subject)
            return True
        except RoadfleetError:
            return False

    def reboot(self) -> BootReport:
        """State reset, not a process restart: phases rerun, storage survives."""
        self._cancel_timers()
        was_active = sorted(n for n, h in self.framework.handles.items()
                            if h.state is FunctionState.ACTIVE)
        for name in list(self._running_behaviors):
            self._stop_behavior(name)
        self.framework.restart()
        self._running_behaviors = {}
        self.state = AgentState.OFFLINE
        return self.boot(self.clock.now, restore=was_active)

    def reprovision(self) -> None:
        """Center-ordered rebuild: wipe local state and come back empty."""
        self._cancel_timers()
        for name in list(self._running_behaviors):
            self._stop_behavior(name)
        self.framework = FunctionFramework(on_transition=self._on_framework_transition)
        self.storage.wipe()
        self.ladder.reset()
        self.quarantined.clear()
        self.state = AgentState.OFFLINE
        self.trace("REPROVISION", station=self.identity.logical_id)
        self.boot(self.clock.now)

    # ------------------------------------------------------------ verification

    def _verify_timer(self) -> None:
        self.local_verify()
        self._timers.append(
            self.clock.schedule_in(self.config.verify_interval, self._verify_timer))

    def local_verify(self, now: float | None = None) -> list[LocalCheckResult]:
        now = self.clock.now if now is None else now
        ctx = CheckContext(
            now=now,
            disk_usage=self.storage.disk_usage(),
            disk_capacity=self.storage.disk_capacity,
            clock_skewed=self.inject.clock_skewed,
            config_digest_ok=not self.inject.config_digest_bad,
            framework_alive=not self.framework.faulted,
            last_collection_at=self.last_collection_at,
            collection_interval=self.config.collection_interval,
            link_up=self.transport.link_up(),
        )
        results = run_local_checks(ctx)
        self.last_check_results = results
        for result in results:
            if result.passed:
                continue
            layer, severity = CHECK_SEVERITY[result.name]
            subject = {
                "DISK_SPACE": "disk", "CLOCK_SANITY": "clock",
                "CONFIG_DIGEST": "config-store", "FRAMEWORK_ALIVE": "framework",
                "DATA_COLLECTION_FRESH": "data-collection", "LINK_UP": "uplink",
            }[result.name]
            event = self._emit_fault(layer, severity, subject, result.detail, now=now)
            if result.name == "CONFIG_DIGEST":
                # self-heal: drop applied configs so reconciliation re-pushes them
                self.storage.configs.clear()
                self.inject.config_digest_bad = False
            elif result.name in ("DATA_COLLECTION_FRESH", "FRAMEWORK_ALIVE"):
                self.handle_fault(event, now)
        return results

    def analyze_logs(self, window_s: float = 60.0,
                     now: float | None = None) -> list[FaultEvent]:
        now = self.clock.now if now is None else now
        events = self.log.analyze(window_s, now)
        for event in events:
            self._send_fault_frame(event)
        return events

    # ------------------------------------------------------------- data & V2I

    def _collection_timer(self) -> None:
        if not self.inject.collection_paused:
            self.last_collection_at = self.clock.now
        self._timers.append(
            self.clock.schedule_in(self.config.collection_interval, self._collection_timer))

    def _distribution_timer(self) -> None:
        sent = self.sf_buffer.distribution_tick(self.neighbor_count,
                                                self.channel_load, self.clock.now)
        for record in sent:
            self.broadcasts.append(record)
            self.trace("BROADCAST", station=self.identity.logical_id,
                       msg=record.message.msg_id, n=record.broadcasts_done)
        self._timers.append(
            self.clock.schedule_in(self.config.distribution_period, self._distribution_timer))

    def enqueue_local_v2i(self, message) -> None:
        result = self.sf_buffer.enqueue(message, self.clock.now)
        if not result.accepted:
            self._log("WARNING", "v2i-buffer", f"local enqueue rejected: {result.reason}")

    # ------------------------------------------------------------- behaviors

    def register_behavior_spec(self, package: str, spec: dict) -> None:
        self._behavior_specs[package] = spec

    def set_behavior_factory(self, factory) -> None:
        self._behavior_factory = factory

    def _start_behavior(self, name: str) -> None:
        if name in self._running_behaviors or self._behavior_factory is None:
            return
        spec = self._behavior_specs.get(name)
        if not spec or not spec.get("kind"):
            return
        behavior = self._behavior_factory(name, spec, self)
        if behavior is not None:
            self._running_behaviors[name] = behavior
            behavior.start()

    def _stop_behavior(self, name: str) -> None:
        behavior = self._running_behaviors.pop(name, None)
        if behavior is not None:
            behavior.stop()

    # --------------------------------------------------------------- plumbing

    def report_fault(self, layer: FaultLayer, severity: Severity, subject: str,
                     detail: str = "") -> FaultEvent:
        """Publish an externally observed fault (scenario injection, watchdog)."""
        return self._emit_fault(layer, severity, subject, detail)

    def _emit_fault(self, layer: FaultLayer, severity: Severity, subject: str,
                    detail: str, ladder_exhausted: bool = False,
                    now: float | None = None, send: bool = True) -> FaultEvent:
        event = FaultEvent(
            station=self.identity.logical_id, layer=layer, severity=severity,
            subject=subject, occurred_at=self.clock.now if now is None else now,
            detail=detail, ladder_exhausted=ladder_exhausted)
        self._log(severity.value, subject, detail)
        if send:
            self._send_fault_frame(event)
        return event

    def _send_fault_frame(self, event: FaultEvent) -> None:
        self._send_or_queue(wire.encode_frame(
            "FAULT", station=self.identity.logical_id, event=event.to_dict()))

    def _send_or_queue(self, blob: bytes) -> None:
        try:
            self.transport.send_mgmt(blob)
        except LinkDown:
            self._pending_frames.append(blob)

    def _flush_pending(self) -> None:
        pending, self._pending_frames = self._pending_frames, []
        for blob in pending:
            self._send_or_queue(blob)

    def _log(self, level: str, subject: str, message: str) -> None:
        self.log.write(self.clock.now, level, subject, message)

    @property
    def management_alive(self) -> bool:
        return management_framework_alive(self.mgmt_framework, self.framework)
