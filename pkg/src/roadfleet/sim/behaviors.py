"""Scripted function behaviors driven by scenario package definitions.

A behavior is what an activated function "does": offer upstream traffic,
beacon V2I messages, spam the local log. Behaviors live entirely on the
virtual clock and stop cleanly on deactivation.
"""

from __future__ import annotations

from ..errors import RoadfleetError
from ..model import MessageOrigin, MessageType, V2IMessage


class _TimerBehavior:
    """Base: one repeating timer between start() and stop()."""

    def __init__(self, name: str, spec: dict, agent):
        self.name = name
        self.spec = spec
        self.agent = agent
        self._timer: int | None = None
        self._running = False

    def start(self) -> None:
        self._running = True
        self._schedule()

    def stop(self) -> None:
        self._running = False
        if self._timer is not None:
            self.agent.clock.cancel(self._timer)
            self._timer = None

    def period(self) -> float:
        raise NotImplementedError

    def tick(self) -> None:
        raise NotImplementedError

    def _schedule(self) -> None:
        if self._running:
            self._timer = self.agent.clock.schedule_in(self.period(), self._fire)

    def _fire(self) -> None:
        if not self._running:
            return
        try:
            self.tick()
        except RoadfleetError as exc:
            self.agent.log.write(self.agent.clock.now, "WARNING", self.name,
                                 f"behavior tick failed: {exc}")
        self._schedule()


class IdleBehavior:
    def __init__(self, name, spec, agent):
        pass

    def start(self):
        pass

    def stop(self):
        pass


class UplinkSender(_TimerBehavior):
    """Offer function-class bytes toward the center at a configured rate."""

    def period(self) -> float:
        rate = float(self.spec.get("rate", 1000.0))
        chunk = int(self.spec.get("chunk", 100))
        return chunk / rate

    def tick(self) -> None:
        chunk = int(self.spec.get("chunk", 100))
        try:
            self.agent.transport.send_function(self.name, chunk)
        except RoadfleetError:
            pass  # offered traffic during an outage is simply lost


class V2IBeacon(_TimerBehavior):
    """Enqueue a local broadcast message every period."""

    def __init__(self, name, spec, agent):
        super().__init__(name, spec, agent)
        self._seq = 0

    def period(self) -> float:
        return float(self.spec.get("period", 2.0))

    def tick(self) -> None:
        self._seq += 1
        now = self.agent.clock.now
        message = V2IMessage(
            msg_id=f"{self.agent.identity.logical_id}:{self.name}:{self._seq:05d}",
            msg_type=MessageType(self.spec.get("msg_type", "CAM_LIKE")),
            priority=int(self.spec.get("priority", 80)),
            size=int(self.spec.get("size", 64)),
            created_at=now,
            expiry=now + float(self.spec.get("ttl", 5.0)),
            redundancy=int(self.spec.get("redundancy", 1)),
            origin=MessageOrigin.LOCAL,
        )
        self.agent.enqueue_local_v2i(message)


class LogNoise(_TimerBehavior):
    """Write configurable log lines; feeds the log-analysis rules."""

    def period(self) -> float:
        return float(self.spec.get("period", 1.0))

    def tick(self) -> None:
        line = str(self.spec.get("line", "retry upstream"))
        level = str(self.spec.get("level", "INFO"))
        for _ in range(int(self.spec.get("burst", 1))):
            self.agent.log.write(self.agent.clock.now, level, self.name, line)


BEHAVIORS = {
    "idle": IdleBehavior,
    "uplink_sender": UplinkSender,
    "v2i_beacon": V2IBeacon,
    "log_noise": LogNoise,
}


def make_behavior(name: str, spec: dict, agent):
    kind = spec.get("kind", "idle")
    try:
        cls = BEHAVIORS[kind]
    except KeyError:
        raise RoadfleetError(f"unknown behavior kind {kind!r}") from None
    return cls(name, spec, agent)
