"""Simulated center links: admission shaping, serialization, delay, loss.

Each station gets two directional links (uplink to the center, downlink
back). Admission runs through per-class token buckets: management traffic
has its own reserved-rate bucket so function backlog can never starve it;
function traffic passes its per-app bucket and then the shared function
bucket capped at (1 - reserved) of the link rate.

After admission a frame serializes on the line at full link bandwidth
(management first, FIFO within a class), then arrives one propagation delay
later unless the seeded loss draw discards it.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable

from ..errors import LinkDown
from ..model import LinkProfile
from .bucket import TokenBucket
from .clock import VirtualClock

DEFAULT_RESERVED_SHARE = 0.10

MANAGEMENT = "MANAGEMENT"


@dataclass(frozen=True)
class TrafficClass:
    kind: str  # "MANAGEMENT" or "FUNCTION"
    app: str | None = None

    @staticmethod
    def management() -> TrafficClass:
        return TrafficClass(MANAGEMENT)

    @staticmethod
    def function(app: str) -> TrafficClass:
        return TrafficClass("FUNCTION", app)

    @property
    def is_management(self) -> bool:
        return self.kind == MANAGEMENT

    def label(self) -> str:
        return "mgmt" if self.is_management else f"fn:{self.app}"


@dataclass
class _PendingFrame:
    size: int
    payload: Any
    stream: str
    cls: TrafficClass
    seq: int


class Link:
    """One direction of a station's center connection."""

    def __init__(self, name: str, profile: LinkProfile, clock: VirtualClock,
                 rng: random.Random,
                 deliver: Callable[[str, Any, int], None],
                 reserved_share: float = DEFAULT_RESERVED_SHARE,
                 trace: Callable[..., None] | None = None):
        self.name = name
        self.profile = profile
        self.clock = clock
        self.rng = rng
        self.deliver = deliver  # deliver(stream, payload, size)
        self.reserved_share = reserved_share
        self.trace = trace or (lambda *a, **k: None)
        self.down = False

        mgmt_rate = max(profile.bandwidth * reserved_share, 1.0)
        # Management burst spans a full second of the *link* rate: any frame
        # the line can serialize within a second must be admissible, even on
        # narrow reserved rates.
        self.mgmt_bucket = TokenBucket(mgmt_rate, burst=float(profile.bandwidth),
                                       now=clock.now)
        fn_rate = max(profile.bandwidth * (1.0 - reserved_share), 1.0)
        self.shared_fn_bucket = TokenBucket(fn_rate, now=clock.now)
        self.app_buckets: dict[str, TokenBucket] = {}

        self._admission_queues: dict[str, deque[_PendingFrame]] = {}
        self._retry_scheduled: set[str] = set()
        self._transmit_queue: list[tuple[int, int, _PendingFrame]] = []
        self._line_busy_until = 0.0
        self._serializing = False
        self._seq = 0
        # counters for tests and reports
        self.delivered_bytes_by_class: dict[str, int] = {}
        self.dropped_frames = 0

    # -- configuration ------------------------------------------------------

    def set_app_rate(self, app: str, rate: float) -> None:
        """Install or replace the shaping bucket for one application."""
        if rate <= 0:
            self.app_buckets.pop(app, None)
        else:
            self.app_buckets[app] = TokenBucket(rate, now=self.clock.now)

    def set_down(self, down: bool) -> None:
        was_down = self.down
        self.down = down
        if was_down and not down:
            for label in list(self._admission_queues):
                self._pump_admission(label)

    # -- sending --------------------------------------------------------------

    def send(self, size: int, payload: Any, cls: TrafficClass,
             stream: str = "wire") -> None:
        """Offer a frame; it is queued, shaped, serialized and delivered later.

        Raises LinkDown immediately when the link is down, so senders can run
        their own retry policy.
        """
        if self.down:
            raise LinkDown(self.name)
        if size <= 0:
            raise ValueError("frame size must be > 0")
        for bucket in self._buckets_for(cls):
            bucket.peek_eligible_at(size, self.clock.now)  # FrameTooLarge check
        frame = _PendingFrame(size, payload, stream, cls, self._next_seq())
        label = cls.label()
        self._admission_queues.setdefault(label, deque()).append(frame)
        self._pump_admission(label)

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    # -- admission ------------------------------------------------------------

    def _buckets_for(self, cls: TrafficClass) -> list[TokenBucket]:
        if cls.is_management:
            return [self.mgmt_bucket]
        buckets = []
        app_bucket = self.app_buckets.get(cls.app or "")
        if app_bucket is not None:
            buckets.append(app_bucket)
        buckets.append(self.shared_fn_bucket)
        return buckets

    def _pump_admission(self, label: str) -> None:
        """Admit the head of one class queue, or schedule a retry."""
        queue = self._admission_queues.get(label)
        if not queue or self.down or label in self._retry_scheduled:
            return
        now = self.clock.now
        frame = queue[0]
        buckets = self._buckets_for(frame.cls)
        eligible = max(b.peek_eligible_at(frame.size, now) for b in buckets)
        if eligible <= now:
            for b in buckets:
                b.consume(frame.size, now)
            queue.popleft()
            self._enqueue_transmit(frame)
            if queue:
                self._pump_admission(label)
        else:
            self._retry_scheduled.add(label)
            self.clock.schedule(eligible, self._admission_retry, label)

    def _admission_retry(self, label: str) -> None:
        self._retry_scheduled.discard(label)
        self._pump_admission(label)

    # -- serialization and delivery --------------------------------------------

    def _enqueue_transmit(self, frame: _PendingFrame) -> None:
        # Management preempts queued (not in-flight) function frames.
        class_rank = 0 if frame.cls.is_management else 1
        self._transmit_queue.append((class_rank, frame.seq, frame))
        self._transmit_queue.sort(key=lambda t: (t[0], t[1]))
        self._pump_transmit()

    def _pump_transmit(self) -> None:
        if self._serializing or not self._transmit_queue:
            return
        now = self.clock.now
        _, _, frame = self._transmit_queue.pop(0)
        start = max(now, self._line_busy_until)
        end = start + frame.size / self.profile.bandwidth
        self._line_busy_until = end
        self._serializing = True
        self.clock.schedule(end, self._transmit_done, frame)

    def _transmit_done(self, frame: _PendingFrame) -> None:
        self._serializing = False
        lost = self.rng.random() < self.profile.loss_rate
        if lost:
            self.dropped_frames += 1
            self.trace("DROP", link=self.name, cls=frame.cls.label(), size=frame.size)
        else:
            arrive = self.clock.now + self.profile.delay_s
            self.clock.schedule(arrive, self._deliver_frame, frame)
        self._pump_transmit()

    def _deliver_frame(self, frame: _PendingFrame) -> None:
        label = frame.cls.label()
        self.delivered_bytes_by_class[label] = (
            self.delivered_bytes_by_class.get(label, 0) + frame.size)
        self.trace("DELIVER", link=self.name, cls=label, size=frame.size)
        self.deliver(frame.stream, frame.payload, frame.size)


@dataclass
class _StationLinks:
    up: Link
    down: Link


class Fabric:
    """All station<->center links plus per-station delivery routing."""

    def __init__(self, clock: VirtualClock, seed: int = 0,
                 reserved_share: float = DEFAULT_RESERVED_SHARE,
                 trace: Callable[..., None] | None = None):
        self.clock = clock
        self.seed = seed
        self.reserved_share = reserved_share
        self.trace = trace
        self._links: dict[str, _StationLinks] = {}
        self._to_center: Callable[[str, str, Any, int], None] | None = None
        self._to_station: dict[str, Callable[[str, Any, int], None]] = {}

    def on_center_receive(self, fn: Callable[[str, str, Any, int], None]) -> None:
        """fn(station, stream, payload, size) for frames arriving at the center."""
        self._to_center = fn

    def on_station_receive(self, station: str,
                           fn: Callable[[str, Any, int], None]) -> None:
        self._to_station[station] = fn

    def attach_station(self, station: str, profile: LinkProfile) -> None:
        # Independent child RNG per link direction keeps loss draws stable
        # when unrelated stations are added to a scenario.
        rng_up = random.Random(f"{self.seed}:{station}:up")
        rng_down = random.Random(f"{self.seed}:{station}:down")
        up = Link(f"{station}/up", profile, self.clock, rng_up,
                  deliver=lambda stream, payload, size, s=station: self._deliver_center(s, stream, payload, size),
                  reserved_share=self.reserved_share, trace=self.trace)
        down = Link(f"{station}/down", profile, self.clock, rng_down,
                    deliver=lambda stream, payload, size, s=station: self._deliver_station(s, stream, payload, size),
                    reserved_share=self.reserved_share, trace=self.trace)
        self._links[station] = _StationLinks(up=up, down=down)

    def detach_station(self, station: str) -> None:
        self._links.pop(station, None)
        self._to_station.pop(station, None)

    def links(self, station: str) -> _StationLinks:
        return self._links[station]

    def has_station(self, station: str) -> bool:
        return station in self._links

    def send_to_center(self, station: str, size: int, payload: Any,
                       cls: TrafficClass, stream: str = "wire") -> None:
        self._links[station].up.send(size, payload, cls, stream)

    def send_to_station(self, station: str, size: int, payload: Any,
                        cls: TrafficClass, stream: str = "wire") -> None:
        self._links[station].down.send(size, payload, cls, stream)

    def set_station_down(self, station: str, down: bool) -> None:
        links = self._links[station]
        links.up.set_down(down)
        links.down.set_down(down)

    def is_station_down(self, station: str) -> bool:
        return self._links[station].up.down

    def set_app_rate(self, station: str, app: str, rate: float) -> None:
        links = self._links[station]
        links.up.set_app_rate(app, rate)
        links.down.set_app_rate(app, rate)

    def _deliver_center(self, station: str, stream: str, payload: Any, size: int) -> None:
        if self._to_center is not None:
            self._to_center(station, stream, payload, size)

    def _deliver_station(self, station: str, stream: str, payload: Any, size: int) -> None:
        fn = self._to_station.get(station)
        if fn is not None:
            fn(stream, payload, size)
