"""Fleet management for simulated roadside stations.

A highly available management center, per-station agents with local
recovery, a quota-enforcing plugin framework, and a deterministic simulated
communication fabric with store-and-forward broadcast distribution.
"""

__version__ = "0.1.0"

from .model import (
    Activation,
    ConfigSet,
    FaultEvent,
    FaultLayer,
    LinkProfile,
    MessageOrigin,
    MessageType,
    PackageManifest,
    PackageType,
    RegionClass,
    ResourceQuota,
    Severity,
    StationIdentity,
    V2IMessage,
    Version,
    builtin_link_profiles,
    link_profile,
    validate_manifest,
)

__all__ = [
    "__version__",
    "Version", "LinkProfile", "builtin_link_profiles", "link_profile",
    "StationIdentity", "RegionClass", "PackageManifest", "PackageType",
    "ResourceQuota", "ConfigSet", "FaultEvent", "FaultLayer", "Severity",
    "V2IMessage", "MessageType", "MessageOrigin", "Activation",
    "validate_manifest",
]
