"""Central package repository: immutable released versions, dependency lookups."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..archive import PackageArchive, read_archive
from ..errors import DuplicateVersionConflict, UnknownPackage
from ..model import PackageManifest, Version, newest_satisfying


@dataclass
class PackageRepository:
    _entries: dict[tuple[str, Version], PackageArchive] = field(default_factory=dict)

    def publish(self, blob: bytes) -> tuple[str, Version]:
        """Store a verified archive. Republishing identical bytes is a no-op;
        a different payload under a released (name, version) is rejected."""
        archive = read_archive(blob)
        key = (archive.manifest.name, archive.manifest.version)
        existing = self._entries.get(key)
        if existing is not None:
            if existing.manifest.payload_digest != archive.manifest.payload_digest:
                raise DuplicateVersionConflict(
                    f"{key[0]} {key[1]} already released with digest "
                    f"{existing.manifest.payload_digest[:12]}...")
            return key
        self._entries[key] = archive
        return key

    def get(self, name: str, version: Version) -> PackageArchive:
        try:
            return self._entries[(name, version)]
        except KeyError:
            raise UnknownPackage(f"{name} {version}") from None

    def has(self, name: str, version: Version) -> bool:
        return (name, version) in self._entries

    def manifest(self, name: str, version: Version) -> PackageManifest:
        return self.get(name, version).manifest

    def versions_of(self, name: str) -> list[Version]:
        return sorted(v for (n, v) in self._entries if n == name)

    def newest_satisfying(self, name: str, minimum: Version) -> Version | None:
        return newest_satisfying(self.versions_of(name), minimum)

    def depends_of(self, name: str, version: Version) -> tuple[tuple[str, Version], ...]:
        entry = self._entries.get((name, version))
        return entry.manifest.depends if entry is not None else ()

    def entries(self) -> list[PackageArchive]:
        return [self._entries[k] for k in sorted(self._entries)]

    def __len__(self) -> int:
        return len(self._entries)
