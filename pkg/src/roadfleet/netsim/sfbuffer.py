"""Store-and-forward buffer for V2I broadcast messages.

Buffer order is (priority desc, expiry asc, msg_id asc). A message is
rebroadcast once per distribution tick until it has been sent `redundancy`
times or expires, whichever comes first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..model import V2IMessage

DEFAULT_CAPACITY = 64
DEFAULT_MAX_FRAMES_PER_TICK = 10


@dataclass(frozen=True)
class EnqueueResult:
    accepted: bool
    reason: str | None = None  # "Expired" | "Capacity"
    evicted: V2IMessage | None = None


@dataclass
class _Slot:
    message: V2IMessage
    broadcasts_done: int = 0
    next_broadcast_at: float = 0.0  # earliest tick time it may broadcast again


@dataclass(frozen=True)
class BroadcastRecord:
    message: V2IMessage
    at: float
    broadcasts_done: int  # count after this broadcast


@dataclass(frozen=True)
class RemovalRecord:
    message: V2IMessage
    at: float
    broadcasts_done: int
    kind: str  # "redundancy" | "expired" | "evicted"

    @property
    def completed(self) -> bool:
        return self.kind == "redundancy"


def _order_key(slot: _Slot):
    return (-slot.message.priority, slot.message.expiry, slot.message.msg_id)


@dataclass
class SfBuffer:
    capacity: int = DEFAULT_CAPACITY
    max_frames_per_tick: int = DEFAULT_MAX_FRAMES_PER_TICK
    _slots: list[_Slot] = field(default_factory=list)
    removals: list[RemovalRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self._slots)

    def messages(self) -> list[V2IMessage]:
        """Current contents in buffer order."""
        return [s.message for s in sorted(self._slots, key=_order_key)]

    def enqueue(self, message: V2IMessage, now: float) -> EnqueueResult:
        """Admit a message, evicting the least important one when full.

        Eviction targets the lowest-priority slot, latest expiry first; a
        message never evicts one of equal or higher priority.
        """
        if message.expiry <= now:
            return EnqueueResult(accepted=False, reason="Expired")
        if any(s.message.msg_id == message.msg_id for s in self._slots):
            raise ValueError(f"duplicate msg_id {message.msg_id!r}")
        evicted = None
        if len(self._slots) >= self.capacity:
            victim = min(self._slots,
                         key=lambda s: (s.message.priority, -s.message.expiry, s.message.msg_id))
            if victim.message.priority >= message.priority:
                return EnqueueResult(accepted=False, reason="Capacity")
            self._slots.remove(victim)
            self.removals.append(RemovalRecord(victim.message, now,
                                               victim.broadcasts_done, "evicted"))
            evicted = victim.message
        self._slots.append(_Slot(message, next_broadcast_at=now))
        return EnqueueResult(accepted=True, evicted=evicted)

    def drop_expired(self, now: float) -> list[RemovalRecord]:
        """Remove every message whose expiry has passed (expiry <= now)."""
        dropped = []
        keep = []
        for slot in self._slots:
            if slot.message.expiry <= now:
                rec = RemovalRecord(slot.message, now, slot.broadcasts_done, "expired")
                dropped.append(rec)
                self.removals.append(rec)
            else:
                keep.append(slot)
        self._slots = keep
        return dropped

    def distribution_tick(self, neighbor_count: int, channel_load: float,
                          now: float) -> list[BroadcastRecord]:
        """Broadcast up to the load-adapted budget, in buffer order.

        budget = floor((1 - channel_load) * max_frames_per_tick). With no
        neighbors in range nothing is sent and nothing is consumed, so no
        broadcast is wasted; messages still expire on schedule.
        """
        self.drop_expired(now)
        if neighbor_count <= 0:
            return []
        load = min(max(channel_load, 0.0), 1.0)
        budget = math.floor((1.0 - load) * self.max_frames_per_tick)
        if budget <= 0:
            return []

        sent: list[BroadcastRecord] = []
        for slot in sorted(self._slots, key=_order_key):
            if len(sent) >= budget:
                break
            if slot.next_broadcast_at > now:
                continue  # already broadcast this tick
            slot.broadcasts_done += 1
            slot.next_broadcast_at = math.nextafter(now, math.inf)
            sent.append(BroadcastRecord(slot.message, now, slot.broadcasts_done))
            if slot.broadcasts_done >= slot.message.redundancy:
                self._slots.remove(slot)
                self.removals.append(
                    RemovalRecord(slot.message, now, slot.broadcasts_done, "redundancy"))
        return sent
