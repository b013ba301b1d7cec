"""Shared domain types: stations, packages, configs, faults, V2I messages.

Everything here is a plain value type. Instances are safe to share between
concurrent contexts; validation happens at construction time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import InvariantViolation, MalformedManifest

MANAGEMENT_PRIORITY = 255
SYSTEM_APP = "system"  # reserved app_name for station-level configuration


class RegionClass(str, Enum):
    HIGHWAY_DENSE = "HIGHWAY_DENSE"
    HIGHWAY_SPARSE = "HIGHWAY_SPARSE"
    RURAL = "RURAL"
    URBAN = "URBAN"


class PackageType(str, Enum):
    SYSTEM = "SYSTEM"
    FUNCTION = "FUNCTION"
    MANAGEMENT = "MANAGEMENT"


class Activation(str, Enum):
    ACTIVE = "ACTIVE"
    INACTIVE = "INACTIVE"


class FaultLayer(str, Enum):
    OS = "OS"
    FRAMEWORK = "FRAMEWORK"
    FUNCTION = "FUNCTION"
    NETWORK = "NETWORK"
    DATA_COLLECTION = "DATA_COLLECTION"


class Severity(str, Enum):
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"

    @property
    def rank(self) -> int:
        return _SEVERITY_RANK[self]


_SEVERITY_RANK = {
    Severity.INFO: 0,
    Severity.WARNING: 1,
    Severity.ERROR: 2,
    Severity.CRITICAL: 3,
}


class MessageType(str, Enum):
    CAM_LIKE = "CAM_LIKE"
    DENM_LIKE = "DENM_LIKE"
    SERVICE = "SERVICE"


class MessageOrigin(str, Enum):
    CENTER = "CENTER"
    VEHICLE = "VEHICLE"
    LOCAL = "LOCAL"


_VERSION_RE = re.compile(r"^(\d+)\.(\d+)\.(\d+)$")


@dataclass(frozen=True, order=True)
class Version:
    """Dotted numeric triple with numeric (not lexicographic-string) ordering."""

    major: int
    minor: int
    patch: int

    @classmethod
    def parse(cls, text: str) -> Version:
        m = _VERSION_RE.match(text.strip()) if isinstance(text, str) else None
        if m is None:
            raise MalformedManifest(f"bad version syntax: {text!r} (want X.Y.Z)")
        return cls(int(m.group(1)), int(m.group(2)), int(m.group(3)))

    def __str__(self) -> str:
        return f"{self.major}.{self.minor}.{self.patch}"


@dataclass(frozen=True)
class LinkProfile:
    """Modeled access technology: bandwidth, one-way delay, frame loss."""

    name: str
    bandwidth: int  # bytes/second
    delay_ms: float  # one-way, milliseconds
    loss_rate: float  # per-frame drop probability

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise InvariantViolation(f"{self.name}: bandwidth must be > 0")
        if self.delay_ms < 0:
            raise InvariantViolation(f"{self.name}: delay must be >= 0")
        if not 0.0 <= self.loss_rate < 1.0:
            raise InvariantViolation(f"{self.name}: loss_rate must be in [0, 1)")

    @property
    def delay_s(self) -> float:
        return self.delay_ms / 1000.0


# Catalogue anchors: fiber at ~10 MB/s down to GPRS at a couple of KB/s.
# Intermediate profiles are fixed values so simulations stay deterministic.
_BUILTIN_PROFILES = (
    LinkProfile("FIBER", 10_000_000, 2.0, 0.0001),
    LinkProfile("XDSL", 250_000, 20.0, 0.001),
    LinkProfile("UMTS", 40_000, 80.0, 0.005),
    LinkProfile("GPRS", 2_000, 300.0, 0.02),
)


def builtin_link_profiles() -> list[LinkProfile]:
    """The four stock access-technology profiles (FIBER, XDSL, UMTS, GPRS)."""
    return list(_BUILTIN_PROFILES)


def link_profile(name: str) -> LinkProfile:
    for p in _BUILTIN_PROFILES:
        if p.name == name:
            return p
    raise KeyError(f"no builtin link profile named {name!r}")


@dataclass(frozen=True)
class StationIdentity:
    logical_id: str
    hardware_id: str
    link_profile: str
    region_class: RegionClass

    def __post_init__(self):
        if not self.logical_id or not self.hardware_id:
            raise InvariantViolation("station ids must be nonempty")


@dataclass(frozen=True)
class ResourceQuota:
    """Per-package resource allowance. A 0 means no access, not unlimited."""

    cpu_share: int = 0  # permille of one CPU
    ram: int = 0  # bytes
    disk: int = 0  # bytes
    bandwidth_up: int = 0  # bytes/second toward the center
    bandwidth_v2i: int = 0  # bytes/second on the broadcast channel

    def __post_init__(self):
        for name in ("cpu_share", "ram", "disk", "bandwidth_up", "bandwidth_v2i"):
            if getattr(self, name) < 0:
                raise InvariantViolation(f"quota.{name} must be >= 0")

    def to_dict(self) -> dict:
        return {
            "cpu_share": self.cpu_share,
            "ram": self.ram,
            "disk": self.disk,
            "bandwidth_up": self.bandwidth_up,
            "bandwidth_v2i": self.bandwidth_v2i,
        }

    @classmethod
    def from_dict(cls, raw: Mapping) -> ResourceQuota:
        try:
            return cls(**{k: int(raw.get(k, 0)) for k in
                          ("cpu_share", "ram", "disk", "bandwidth_up", "bandwidth_v2i")})
        except (TypeError, ValueError) as exc:
            raise MalformedManifest(f"bad quota: {exc}") from exc


@dataclass(frozen=True)
class PackageManifest:
    name: str
    version: Version
    pkg_type: PackageType
    depends: tuple[tuple[str, Version], ...]  # (name, minimum version)
    priority: int
    quota: ResourceQuota
    payload_digest: str  # sha-256 hex over payload bytes

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "version": str(self.version),
            "type": self.pkg_type.value,
            "depends": [[d, str(v)] for d, v in self.depends],
            "priority": self.priority,
            "quota": self.quota.to_dict(),
            "payload_digest": self.payload_digest,
        }


def validate_manifest(raw: Mapping) -> PackageManifest:
    """Check a parsed manifest document and return the validated value.

    Idempotent: a dict produced by ``PackageManifest.to_dict`` validates back
    to an equal manifest.
    """
    if not isinstance(raw, Mapping):
        raise MalformedManifest(f"manifest must be an object, got {type(raw).__name__}")
    missing = [k for k in ("name", "version", "type") if k not in raw]
    if missing:
        raise MalformedManifest(f"manifest missing fields: {missing}")

    name = raw["name"]
    if not isinstance(name, str) or not name:
        raise MalformedManifest("manifest name must be a nonempty string")
    version = raw["version"] if isinstance(raw["version"], Version) else Version.parse(raw["version"])
    try:
        pkg_type = PackageType(raw["type"])
    except ValueError:
        raise MalformedManifest(f"unknown package type {raw['type']!r}") from None

    depends: list[tuple[str, Version]] = []
    for entry in raw.get("depends", ()):
        try:
            dep_name, dep_min = entry
        except (TypeError, ValueError):
            raise MalformedManifest(f"bad dependency entry: {entry!r}") from None
        dep_version = dep_min if isinstance(dep_min, Version) else Version.parse(dep_min)
        depends.append((str(dep_name), dep_version))
    if any(dep == name for dep, _ in depends):
        raise InvariantViolation(f"package {name!r} depends on itself")

    priority = raw.get("priority", 0)
    if not isinstance(priority, int) or not 0 <= priority <= 255:
        raise MalformedManifest(f"priority must be an integer in 0..255, got {priority!r}")
    # Management is never starved: its packages sit at the top priority.
    if pkg_type is PackageType.MANAGEMENT and priority != MANAGEMENT_PRIORITY:
        raise InvariantViolation(
            f"MANAGEMENT package {name!r} must have priority {MANAGEMENT_PRIORITY}, got {priority}")

    quota_raw = raw.get("quota", {})
    quota = quota_raw if isinstance(quota_raw, ResourceQuota) else ResourceQuota.from_dict(quota_raw)
    digest = raw.get("payload_digest", "")
    if not isinstance(digest, str):
        raise MalformedManifest("payload_digest must be a hex string")

    return PackageManifest(
        name=name,
        version=version,
        pkg_type=pkg_type,
        depends=tuple(depends),
        priority=priority,
        quota=quota,
        payload_digest=digest,
    )


@dataclass(frozen=True)
class ConfigSet:
    """One application's key-value configuration at a specific version."""

    app_name: str
    version: int
    entries: Mapping[str, str]

    def __post_init__(self):
        if self.version < 1:
            raise InvariantViolation("config version must be >= 1")
        if any(not k for k in self.entries):
            raise InvariantViolation("config keys must be nonempty")

    def to_dict(self) -> dict:
        return {"app_name": self.app_name, "version": self.version,
                "entries": dict(self.entries)}

    @classmethod
    def from_dict(cls, raw: Mapping) -> ConfigSet:
        return cls(raw["app_name"], int(raw["version"]), dict(raw["entries"]))


@dataclass(frozen=True)
class FaultEvent:
    """One classified fault observation from a station subsystem."""

    station: str
    layer: FaultLayer
    severity: Severity
    subject: str
    occurred_at: float
    detail: str = ""
    # Set by the escalation rung when the local recovery ladder ran out of
    # options; the center decision table keys on this.
    ladder_exhausted: bool = False

    def to_dict(self) -> dict:
        return {
            "station": self.station,
            "layer": self.layer.value,
            "severity": self.severity.value,
            "subject": self.subject,
            "occurred_at": self.occurred_at,
            "detail": self.detail,
            "ladder_exhausted": self.ladder_exhausted,
        }

    @classmethod
    def from_dict(cls, raw: Mapping) -> FaultEvent:
        return cls(
            station=raw["station"],
            layer=FaultLayer(raw["layer"]),
            severity=Severity(raw["severity"]),
            subject=raw.get("subject", ""),
            occurred_at=float(raw["occurred_at"]),
            detail=raw.get("detail", ""),
            ladder_exhausted=bool(raw.get("ladder_exhausted", False)),
        )


@dataclass(frozen=True)
class V2IMessage:
    """Prioritized, expiring broadcast payload for the store-and-forward buffer."""

    msg_id: str
    msg_type: MessageType
    priority: int
    size: int  # bytes
    created_at: float
    expiry: float
    redundancy: int  # required broadcast count
    origin: MessageOrigin

    def __post_init__(self):
        if self.size <= 0:
            raise InvariantViolation("message size must be > 0")
        if self.redundancy < 1:
            raise InvariantViolation("redundancy must be >= 1")
        if self.expiry <= self.created_at:
            raise InvariantViolation("expiry must be strictly after creation")
        if not 0 <= self.priority <= 255:
            raise InvariantViolation("priority must be in 0..255")

    def to_dict(self) -> dict:
        return {
            "msg_id": self.msg_id,
            "msg_type": self.msg_type.value,
            "priority": self.priority,
            "size": self.size,
            "created_at": self.created_at,
            "expiry": self.expiry,
            "redundancy": self.redundancy,
            "origin": self.origin.value,
        }

    @classmethod
    def from_dict(cls, raw: Mapping) -> V2IMessage:
        return cls(
            msg_id=raw["msg_id"],
            msg_type=MessageType(raw["msg_type"]),
            priority=int(raw["priority"]),
            size=int(raw["size"]),
            created_at=float(raw["created_at"]),
            expiry=float(raw["expiry"]),
            redundancy=int(raw["redundancy"]),
            origin=MessageOrigin(raw["origin"]),
        )


def newest_satisfying(versions: Iterable[Version], minimum: Version) -> Version | None:
    """Pick the newest version >= minimum, or None when nothing qualifies."""
    best: Version | None = None
    for v in versions:
        if v >= minimum and (best is None or v > best):
            best = v
    return best
