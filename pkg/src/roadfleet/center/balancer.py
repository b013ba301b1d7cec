"""Round-robin dispatch over a pool of interchangeable workers.

Workers hold no private state (everything lives in the shared store), so a
request that dies with its worker can simply be retried through a fresh
dispatch and will observe the same acknowledged writes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NoWorkerAvailable, UnknownWorker


@dataclass
class WorkerPool:
    worker_ids: list[str]
    _healthy: dict[str, bool] = field(default_factory=dict)
    _cursor: int = 0
    dispatch_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.worker_ids:
            raise ValueError("pool needs at least one worker")
        for w in self.worker_ids:
            self._healthy.setdefault(w, True)
            self.dispatch_counts.setdefault(w, 0)

    def healthy_workers(self) -> list[str]:
        return [w for w in self.worker_ids if self._healthy[w]]

    def is_healthy(self, worker_id: str) -> bool:
        try:
            return self._healthy[worker_id]
        except KeyError:
            raise UnknownWorker(worker_id) from None

    def set_health(self, worker_id: str, healthy: bool) -> None:
        """Failover switch; a recovered worker rejoins at its list position."""
        if worker_id not in self._healthy:
            raise UnknownWorker(worker_id)
        self._healthy[worker_id] = healthy

    def dispatch(self, request_id: str | None = None) -> str:
        """Next healthy worker in rotation; skips DOWN slots in place."""
        del request_id  # routing ignores content by design
        n = len(self.worker_ids)
        for offset in range(n):
            idx = (self._cursor + offset) % n
            worker = self.worker_ids[idx]
            if self._healthy[worker]:
                self._cursor = (idx + 1) % n
                self.dispatch_counts[worker] += 1
                return worker
        raise NoWorkerAvailable("all workers are DOWN")
