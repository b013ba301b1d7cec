"""Local system verification: the six station self-checks."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import FaultLayer, Severity

CHECK_NAMES = ("DISK_SPACE", "CLOCK_SANITY", "CONFIG_DIGEST", "FRAMEWORK_ALIVE",
               "DATA_COLLECTION_FRESH", "LINK_UP")

# Severity tracks roughly how expensive the fix is.
CHECK_SEVERITY = {
    "DISK_SPACE": (FaultLayer.OS, Severity.ERROR),
    "CLOCK_SANITY": (FaultLayer.OS, Severity.WARNING),
    "CONFIG_DIGEST": (FaultLayer.OS, Severity.ERROR),
    "FRAMEWORK_ALIVE": (FaultLayer.FRAMEWORK, Severity.CRITICAL),
    "DATA_COLLECTION_FRESH": (FaultLayer.DATA_COLLECTION, Severity.WARNING),
    "LINK_UP": (FaultLayer.NETWORK, Severity.ERROR),
}

STALE_COLLECTION_INTERVALS = 2


@dataclass(frozen=True)
class LocalCheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "status": "PASS" if self.passed else "FAIL",
                "detail": self.detail}


@dataclass
class CheckContext:
    """Everything the checks read; the agent assembles one per run."""

    now: float
    disk_usage: int
    disk_capacity: int
    clock_skewed: bool
    config_digest_ok: bool
    framework_alive: bool
    last_collection_at: float
    collection_interval: float
    link_up: bool


def run_local_checks(ctx: CheckContext) -> list[LocalCheckResult]:
    results = []

    ok = ctx.disk_usage <= ctx.disk_capacity
    results.append(LocalCheckResult(
        "DISK_SPACE", ok,
        f"{ctx.disk_usage}/{ctx.disk_capacity} bytes used"))

    results.append(LocalCheckResult(
        "CLOCK_SANITY", not ctx.clock_skewed,
        "skew detected" if ctx.clock_skewed else "clock within bounds"))

    results.append(LocalCheckResult(
        "CONFIG_DIGEST", ctx.config_digest_ok,
        "config store digest mismatch" if not ctx.config_digest_ok else "configs intact"))

    results.append(LocalCheckResult(
        "FRAMEWORK_ALIVE", ctx.framework_alive,
        "function framework faulted" if not ctx.framework_alive else "framework responding"))

    stale_after = ctx.collection_interval * STALE_COLLECTION_INTERVALS
    age = ctx.now - ctx.last_collection_at
    results.append(LocalCheckResult(
        "DATA_COLLECTION_FRESH", age <= stale_after,
        f"last sample {age:.1f}s ago (stale after {stale_after:.1f}s)"))

    results.append(LocalCheckResult(
        "LINK_UP", ctx.link_up,
        "center link down" if not ctx.link_up else "center link up"))

    return results
