"""Service-oriented plugin host with quota accounting.

Functions live in a five-state lifecycle and publish services into a
registry while ACTIVE. The resource ledger enforces per-function quotas plus
a reserved management share, and arbitrates contended resources in favor of
higher-priority functions. A second, structurally separate management
framework hosts the management components, so management stays functional
whatever happens to the function framework.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable

from .errors import DuplicateName, IllegalTransition
from .model import PackageManifest, PackageType, ResourceQuota

DEFAULT_RESERVED_SHARE = 0.10


class FunctionState(str, Enum):
    INSTALLED = "INSTALLED"
    RESOLVED = "RESOLVED"
    ACTIVE = "ACTIVE"
    STOPPED = "STOPPED"
    FAULTED = "FAULTED"


_LEGAL_TRANSITIONS = {
    (FunctionState.INSTALLED, FunctionState.RESOLVED),
    (FunctionState.RESOLVED, FunctionState.ACTIVE),
    (FunctionState.ACTIVE, FunctionState.STOPPED),
    (FunctionState.STOPPED, FunctionState.ACTIVE),
    (FunctionState.FAULTED, FunctionState.RESOLVED),
}


class Resource(str, Enum):
    CPU = "CPU"  # permille of one core
    RAM = "RAM"  # bytes
    DISK = "DISK"  # bytes
    BANDWIDTH_UP = "BANDWIDTH_UP"  # bytes/second
    BANDWIDTH_V2I = "BANDWIDTH_V2I"  # bytes/second


def quota_for(quota: ResourceQuota, resource: Resource) -> int:
    return {
        Resource.CPU: quota.cpu_share,
        Resource.RAM: quota.ram,
        Resource.DISK: quota.disk,
        Resource.BANDWIDTH_UP: quota.bandwidth_up,
        Resource.BANDWIDTH_V2I: quota.bandwidth_v2i,
    }[resource]


@dataclass
class FunctionHandle:
    name: str
    version: str
    priority: int
    quota: ResourceQuota
    is_management: bool = False
    state: FunctionState = FunctionState.INSTALLED
    provides: tuple[str, ...] = ()  # service interface names
    requires: tuple[str, ...] = ()  # service interfaces needed to resolve


@dataclass(frozen=True)
class AcquireResult:
    granted: bool
    reason: str | None = None  # "OwnQuota" | "ReservedShare" | "Capacity" | "NotActive"


@dataclass
class ResourceLedger:
    """Exact integer accounting of grants per handle and resource."""

    capacities: dict[Resource, int]
    reserved_share: Fraction = Fraction(1, 10)
    _usage: dict[tuple[str, Resource], int] = field(default_factory=dict)
    _management: set[str] = field(default_factory=set)

    def __post_init__(self):
        if not isinstance(self.reserved_share, Fraction):
            # exact boundary math; float shares like 0.1 would round 90 MB
            # down to 89_999_999 bytes
            self.reserved_share = Fraction(str(self.reserved_share))
        if not 0 <= self.reserved_share < 1:
            raise ValueError("reserved_share must be in [0, 1)")

    def mark_management(self, name: str) -> None:
        self._management.add(name)

    def usage(self, name: str, resource: Resource) -> int:
        return self._usage.get((name, resource), 0)

    def total_usage(self, resource: Resource) -> int:
        return sum(v for (_, r), v in self._usage.items() if r is resource)

    def non_management_usage(self, resource: Resource) -> int:
        return sum(v for (n, r), v in self._usage.items()
                   if r is resource and n not in self._management)

    def non_management_cap(self, resource: Resource) -> int:
        # floor keeps the reserve conservative: reserved share is never invaded
        return int((1 - self.reserved_share) * self.capacities[resource])

    def try_acquire(self, name: str, resource: Resource, amount: int,
                    own_quota: int, is_management: bool) -> AcquireResult:
        if amount < 0:
            raise ValueError("amount must be >= 0")
        if is_management:
            self._management.add(name)
        if self.usage(name, resource) + amount > own_quota:
            return AcquireResult(False, "OwnQuota")
        if self.total_usage(resource) + amount > self.capacities[resource]:
            return AcquireResult(False, "Capacity")
        if not is_management:
            if self.non_management_usage(resource) + amount > self.non_management_cap(resource):
                return AcquireResult(False, "ReservedShare")
        key = (name, resource)
        self._usage[key] = self._usage.get(key, 0) + amount
        return AcquireResult(True)

    def release(self, name: str, resource: Resource, amount: int) -> None:
        key = (name, resource)
        held = self._usage.get(key, 0)
        if amount > held:
            raise ValueError(f"{name} releasing {amount} > held {held} of {resource.value}")
        remaining = held - amount
        if remaining:
            self._usage[key] = remaining
        else:
            self._usage.pop(key, None)

    def release_all(self, name: str) -> None:
        for key in [k for k in self._usage if k[0] == name]:
            del self._usage[key]


def arbitrate(contenders: list[tuple[FunctionHandle, int]], free: int) -> dict[str, int]:
    """Split `free` units among contenders, preferring higher priorities.

    Weights are priority + 1 so a priority-0 function still gets a share.
    Rounding is largest-remainder with ties broken by name ascending; each
    grant is capped at the contender's request, and capped-away leftover is
    redistributed proportionally in one more pass.
    """
    requests = {h.name: max(req, 0) for h, req in contenders}
    weights = {h.name: h.priority + 1 for h, _ in contenders}
    grants = {name: 0 for name in requests}
    remaining = free
    pool = sorted(requests)
    for _ in range(2):  # main pass + one redistribution pass
        live = [n for n in pool if requests[n] > grants[n]]
        if not live or remaining <= 0:
            break
        total_w = sum(weights[n] for n in live)
        shares = {n: Fraction(remaining) * weights[n] / total_w for n in live}
        floored = {n: min(int(shares[n]), requests[n] - grants[n]) for n in live}
        leftover = remaining - sum(floored.values())
        # Hand the leftover units out by largest fractional remainder; a
        # contender at its cap takes nothing more.
        order = sorted(live, key=lambda n: (-(shares[n] - int(shares[n])), n))
        extra = {n: 0 for n in live}
        for n in order:
            if leftover <= 0:
                break
            room = requests[n] - grants[n] - floored[n]
            take = min(1, room)
            if take > 0 and shares[n] - int(shares[n]) > 0:
                extra[n] = take
                leftover -= take
        for n in live:
            grants[n] += floored[n] + extra[n]
        remaining = free - sum(grants.values())
    return grants


class FunctionFramework:
    """The function-side plugin host of one station."""

    def __init__(self, ledger: ResourceLedger | None = None,
                 on_transition: Callable[[FunctionHandle, FunctionState], None] | None = None):
        self.handles: dict[str, FunctionHandle] = {}
        self.ledger = ledger or ResourceLedger(capacities={
            Resource.CPU: 1000,
            Resource.RAM: 256_000_000,
            Resource.DISK: 1_000_000_000,
            Resource.BANDWIDTH_UP: 250_000,
            Resource.BANDWIDTH_V2I: 100_000,
        })
        self.on_transition = on_transition
        self.faulted = False  # whole-framework health, not per function

    # -- registration and lifecycle -----------------------------------------

    def register_function(self, manifest: PackageManifest,
                          provides: Iterable[str] = (),
                          requires: Iterable[str] = ()) -> FunctionHandle:
        if manifest.name in self.handles:
            raise DuplicateName(manifest.name)
        handle = FunctionHandle(
            name=manifest.name,
            version=str(manifest.version),
            priority=manifest.priority,
            quota=manifest.quota,
            is_management=manifest.pkg_type is PackageType.MANAGEMENT,
            provides=tuple(provides),
            requires=tuple(requires),
        )
        if handle.is_management:
            self.ledger.mark_management(handle.name)
        self.handles[manifest.name] = handle
        return handle

    def unregister(self, name: str) -> None:
        handle = self.handles.pop(name, None)
        if handle is not None:
            self.ledger.release_all(name)

    def resolve(self, name: str) -> FunctionHandle:
        """INSTALLED -> RESOLVED once every required service has a provider."""
        handle = self._get(name)
        if handle.state is not FunctionState.INSTALLED:
            raise IllegalTransition(f"{name}: resolve from {handle.state.value}")
        missing = [svc for svc in handle.requires if self.lookup_service(svc) is None]
        if missing:
            raise IllegalTransition(f"{name}: unresolved services {missing}")
        handle.state = FunctionState.RESOLVED
        return handle

    def set_state(self, name: str, target: FunctionState) -> FunctionState:
        handle = self._get(name)
        if target is FunctionState.FAULTED:
            handle.state = FunctionState.FAULTED  # any state may fault
        elif (handle.state, target) in _LEGAL_TRANSITIONS:
            handle.state = target
        else:
            raise IllegalTransition(
                f"{name}: {handle.state.value} -> {target.value} not allowed")
        if self.on_transition is not None:
            self.on_transition(handle, handle.state)
        return handle.state

    def _get(self, name: str) -> FunctionHandle:
        try:
            return self.handles[name]
        except KeyError:
            raise KeyError(f"no function named {name!r}") from None

    # -- service registry -----------------------------------------------------

    def lookup_service(self, interface: str) -> FunctionHandle | None:
        """Highest-priority ACTIVE provider; ties broken by name ascending."""
        best = None
        for handle in self.handles.values():
            if handle.state is not FunctionState.ACTIVE:
                continue
            if interface not in handle.provides:
                continue
            if best is None or (-handle.priority, handle.name) < (-best.priority, best.name):
                best = handle
        return best

    def service_providers(self, interface: str) -> list[FunctionHandle]:
        providers = [h for h in self.handles.values()
                     if h.state is FunctionState.ACTIVE and interface in h.provides]
        return sorted(providers, key=lambda h: (-h.priority, h.name))

    # -- resources --------------------------------------------------------------

    def try_acquire(self, name: str, resource: Resource, amount: int) -> AcquireResult:
        handle = self._get(name)
        if handle.state is not FunctionState.ACTIVE and not handle.is_management:
            return AcquireResult(False, "NotActive")
        return self.ledger.try_acquire(name, resource, amount,
                                       own_quota=quota_for(handle.quota, resource),
                                       is_management=handle.is_management)

    def release(self, name: str, resource: Resource, amount: int) -> None:
        self.ledger.release(name, resource, amount)

    def arbitrate(self, contenders: list[tuple[str, int]], resource: Resource) -> dict[str, int]:
        """Split the currently free non-management capacity of one resource."""
        pairs = []
        for name, req in contenders:
            handle = self._get(name)
            admissible = min(req, max(quota_for(handle.quota, resource)
                                      - self.ledger.usage(name, resource), 0))
            pairs.append((handle, admissible))
        free = self.ledger.non_management_cap(resource) - self.ledger.non_management_usage(resource)
        return arbitrate(pairs, max(free, 0))

    # -- whole-framework health ---------------------------------------------------

    def mark_faulted(self) -> None:
        self.faulted = True

    def restart(self) -> list[str]:
        """Reset the framework; returns names that were ACTIVE before."""
        was_active = sorted(n for n, h in self.handles.items()
                            if h.state is FunctionState.ACTIVE)
        for handle in self.handles.values():
            self.ledger.release_all(handle.name)
            handle.state = FunctionState.INSTALLED
        self.faulted = False
        return was_active


class ManagementFramework:
    """Structurally separate host for management components.

    Its liveness never depends on the function framework: the only way it
    reports dead is an OS-level failure of the agent itself.
    """

    def __init__(self):
        self.os_alive = True

    def alive(self) -> bool:
        return self.os_alive


def management_framework_alive(mgmt: ManagementFramework,
                               function_framework: FunctionFramework) -> bool:
    """True whenever the management side runs, however broken the function side is."""
    del function_framework  # independence is the whole point
    return mgmt.alive()
