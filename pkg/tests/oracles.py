"""Shared brute-force oracles used by unit and acceptance tests.

These restate contracts naively and independently of the library
implementations they check.
"""

import math
from fractions import Fraction


class ReferenceBuffer:
    """Naive store-and-forward buffer: full sort and explicit scans each call."""

    def __init__(self, capacity, max_frames_per_tick):
        self.capacity = capacity
        self.max_frames = max_frames_per_tick
        self.items = []  # (message, broadcasts_done)

    def enqueue(self, message, now):
        if message.expiry <= now:
            return ("rejected", "Expired")
        if len(self.items) >= self.capacity:
            lowest = min(m.priority for m, _ in self.items)
            if lowest >= message.priority:
                return ("rejected", "Capacity")
            victims = [(m, d) for m, d in self.items if m.priority == lowest]
            victims.sort(key=lambda t: (-t[0].expiry, t[0].msg_id))
            self.items.remove(victims[0])
        self.items.append((message, 0))
        return ("accepted", None)

    def tick(self, neighbor_count, load, now):
        self.items = [(m, d) for m, d in self.items if m.expiry > now]
        if neighbor_count <= 0:
            return []
        budget = math.floor((1.0 - load) * self.max_frames)
        ordered = sorted(self.items,
                         key=lambda t: (-t[0].priority, t[0].expiry, t[0].msg_id))
        sent = []
        done_now = {m.msg_id: d for m, d in self.items}
        for message, done in ordered[:max(budget, 0)]:
            done_now[message.msg_id] = done + 1
            sent.append((message.msg_id, done + 1))
        self.items = [(m, done_now[m.msg_id]) for m, _ in self.items
                      if done_now[m.msg_id] < m.redundancy]
        return sent


def largest_remainder_split(weighted, free):
    """Proportional split oracle: weighted = {name: (weight, cap)}."""
    grants = {n: 0 for n in weighted}
    remaining = free
    for _ in range(2):
        live = {n: wc for n, wc in weighted.items() if wc[1] > grants[n]}
        if not live or remaining <= 0:
            break
        total = sum(w for w, _ in live.values())
        exact = {n: Fraction(remaining) * w / total for n, (w, _) in live.items()}
        floors = {n: min(int(exact[n]), live[n][1] - grants[n]) for n in live}
        left = remaining - sum(floors.values())
        for n in sorted(live, key=lambda n: (-(exact[n] - int(exact[n])), n)):
            if left <= 0:
                break
            if exact[n] - int(exact[n]) > 0 and grants[n] + floors[n] < live[n][1]:
                floors[n] += 1
                left -= 1
        for n in floors:
            grants[n] += floors[n]
        remaining = free - sum(grants.values())
    return grants
