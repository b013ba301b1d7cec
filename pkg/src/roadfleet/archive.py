"""Unified package container: a ZIP with manifest.json and payload/ files.

payload_digest is SHA-256 over the concatenation of payload file bytes in
ascending path order, so the digest is independent of zip metadata.
"""

from __future__ import annotations

import hashlib
import io
import json
import zipfile
from dataclasses import dataclass
from typing import Mapping

from .errors import MalformedArchive
from .model import PackageManifest, validate_manifest

MANIFEST_NAME = "manifest.json"
PAYLOAD_PREFIX = "payload/"


def payload_digest(payload: Mapping[str, bytes]) -> str:
    """Digest payload files in ascending path order."""
    h = hashlib.sha256()
    for path in sorted(payload):
        h.update(payload[path])
    return h.hexdigest()


@dataclass(frozen=True)
class PackageArchive:
    manifest: PackageManifest
    payload: Mapping[str, bytes]  # path under payload/ -> bytes

    @property
    def payload_size(self) -> int:
        return sum(len(b) for b in self.payload.values())


def build_archive(manifest_fields: Mapping, payload: Mapping[str, bytes]) -> bytes:
    """Assemble archive bytes; fills in payload_digest from the payload."""
    fields = dict(manifest_fields)
    fields["payload_digest"] = payload_digest(payload)
    manifest = validate_manifest(fields)

    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        zf.writestr(MANIFEST_NAME, json.dumps(manifest.to_dict(), sort_keys=True))
        for path in sorted(payload):
            zf.writestr(PAYLOAD_PREFIX + path, payload[path])
    return buf.getvalue()


def read_archive(blob: bytes) -> PackageArchive:
    """Parse and fully verify an archive: manifest valid, digest matches."""
    try:
        zf = zipfile.ZipFile(io.BytesIO(blob))
    except zipfile.BadZipFile as exc:
        raise MalformedArchive(f"not a zip container: {exc}") from exc

    names = zf.namelist()
    if MANIFEST_NAME not in names:
        raise MalformedArchive(f"archive has no {MANIFEST_NAME} at root")
    try:
        raw = json.loads(zf.read(MANIFEST_NAME).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedArchive(f"unreadable manifest: {exc}") from exc
    manifest = validate_manifest(raw)

    payload: dict[str, bytes] = {}
    for name in names:
        if name.startswith(PAYLOAD_PREFIX) and not name.endswith("/"):
            payload[name[len(PAYLOAD_PREFIX):]] = zf.read(name)

    actual = payload_digest(payload)
    if actual != manifest.payload_digest:
        raise MalformedArchive(
            f"payload digest mismatch: manifest says {manifest.payload_digest[:12]}..., "
            f"payload is {actual[:12]}...")
    return PackageArchive(manifest=manifest, payload=payload)
