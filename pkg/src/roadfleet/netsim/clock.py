"""Discrete-event virtual clock.

Events fire in (time, insertion sequence) order, so two runs that schedule
the same events in the same order execute identically. Timestamps are float
seconds from simulation start.
"""

from __future__ import annotations

import heapq
from typing import Any, Callable


class VirtualClock:
    def __init__(self, start: float = 0.0):
        self.now = start
        self._heap: list[tuple[float, int, int]] = []  # (time, seq, event_id)
        self._events: dict[int, tuple[Callable, tuple]] = {}
        self._seq = 0

    def schedule(self, at: float, fn: Callable[..., Any], *args) -> int:
        """Register fn(*args) to run at virtual time `at`. Returns an id."""
        if at < self.now:
            raise ValueError(f"cannot schedule at {at} before now={self.now}")
        event_id = self._seq
        self._seq += 1
        self._events[event_id] = (fn, args)
        heapq.heappush(self._heap, (at, event_id, event_id))
        return event_id

    def schedule_in(self, delay: float, fn: Callable[..., Any], *args) -> int:
        return self.schedule(self.now + delay, fn, *args)

    def cancel(self, event_id: int) -> bool:
        """Cancel a pending event. Returns False if already run or cancelled."""
        return self._events.pop(event_id, None) is not None

    def advance(self, until: float) -> list[tuple[float, int]]:
        """Run every event with time <= until; ends with now == until.

        Returns the executed (time, event_id) pairs in execution order.
        Events scheduled during the advance run too, when they fall inside
        the window.
        """
        if until < self.now:
            raise ValueError(f"cannot advance backwards to {until} from {self.now}")
        executed = []
        while self._heap and self._heap[0][0] <= until:
            at, _, event_id = heapq.heappop(self._heap)
            entry = self._events.pop(event_id, None)
            if entry is None:
                continue  # cancelled
            self.now = max(self.now, at)
            fn, args = entry
            fn(*args)
            executed.append((at, event_id))
        self.now = until
        return executed

    def pending_count(self) -> int:
        return len(self._events)

    def next_event_time(self) -> float | None:
        while self._heap and self._heap[0][2] not in self._events:
            heapq.heappop(self._heap)
        return self._heap[0][0] if self._heap else None
