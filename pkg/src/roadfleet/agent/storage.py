"""Simulated station storage: package root, config store, disk ledger."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..archive import PackageArchive
from ..errors import DigestMismatch, DiskQuotaExceeded, MissingDependency
from ..model import ConfigSet, Version


@dataclass(frozen=True)
class InstallResult:
    name: str
    version: Version
    changed: bool  # False for the idempotent re-install of identical bytes


@dataclass
class InstalledPackage:
    archive: PackageArchive

    @property
    def version(self) -> Version:
        return self.archive.manifest.version

    @property
    def size(self) -> int:
        return self.archive.payload_size


@dataclass
class StationStorage:
    disk_capacity: int = 1_000_000_000
    packages: dict[str, InstalledPackage] = field(default_factory=dict)
    configs: dict[str, ConfigSet] = field(default_factory=dict)
    archive_cache: dict[str, PackageArchive] = field(default_factory=dict)
    external_usage: int = 0  # bytes not owned by any package (scenario hook)

    def disk_usage(self) -> int:
        return sum(p.size for p in self.packages.values()) + self.external_usage

    def installed_versions(self) -> dict[str, Version]:
        return {name: pkg.version for name, pkg in self.packages.items()}

    def install(self, archive: PackageArchive, verify_digest: bool = True) -> InstallResult:
        """Unpack a package into the root. Idempotent for identical bytes.

        The center orders installs, so a missing dependency is an error
        here, never a trigger to go fetch it.
        """
        manifest = archive.manifest
        if verify_digest:
            from ..archive import payload_digest
            if payload_digest(archive.payload) != manifest.payload_digest:
                raise DigestMismatch(f"{manifest.name} {manifest.version}")

        existing = self.packages.get(manifest.name)
        if (existing is not None and existing.version == manifest.version
                and existing.archive.manifest.payload_digest == manifest.payload_digest):
            return InstallResult(manifest.name, manifest.version, changed=False)

        for dep_name, dep_min in manifest.depends:
            dep = self.packages.get(dep_name)
            if dep is None or dep.version < dep_min:
                raise MissingDependency(dep_name)

        size = archive.payload_size
        if size > manifest.quota.disk:
            raise DiskQuotaExceeded(
                f"{manifest.name}: payload {size} B exceeds its disk quota "
                f"{manifest.quota.disk} B")
        usage_without = self.disk_usage() - (existing.size if existing else 0)
        if usage_without + size > self.disk_capacity:
            raise DiskQuotaExceeded(
                f"{manifest.name}: station disk full "
                f"({usage_without + size} > {self.disk_capacity})")

        self.packages[manifest.name] = InstalledPackage(archive)
        self.archive_cache[manifest.name] = archive
        return InstallResult(manifest.name, manifest.version, changed=True)

    def remove(self, name: str) -> bool:
        return self.packages.pop(name, None) is not None

    def apply_config(self, config: ConfigSet) -> None:
        self.configs[config.app_name] = config

    def applied_config_versions(self) -> dict[str, int]:
        return {app: cfg.version for app, cfg in self.configs.items()}

    def wipe(self) -> None:
        """Factory reset: packages and configs gone, cache kept (it models
        the center-side archive source, not station disk)."""
        self.packages.clear()
        self.configs.clear()
        self.external_usage = 0
