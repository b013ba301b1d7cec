"""Agent<->center frame protocol.

A frame is a 4-byte big-endian length prefix followed by one UTF-8 JSON
object carrying at least a "kind" field. Decoders ignore unknown fields so
either side can add fields without breaking the other.
"""

from __future__ import annotations

import json
import struct

FRAME_KINDS = ("HELLO", "HEARTBEAT", "REPORT", "ACTIONS", "FAULT", "DECISION",
               "PING", "PONG")

_LEN = struct.Struct(">I")


class FrameError(ValueError):
    pass


def encode_frame(kind: str, **fields) -> bytes:
    if kind not in FRAME_KINDS:
        raise FrameError(f"unknown frame kind {kind!r}")
    body = dict(fields)
    body["kind"] = kind
    payload = json.dumps(body, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return _LEN.pack(len(payload)) + payload


def decode_frame(blob: bytes) -> dict:
    """Decode one complete frame. The returned dict keeps unknown fields."""
    if len(blob) < _LEN.size:
        raise FrameError("frame shorter than its length prefix")
    (length,) = _LEN.unpack_from(blob)
    if len(blob) != _LEN.size + length:
        raise FrameError(f"frame length {len(blob) - _LEN.size} != declared {length}")
    try:
        body = json.loads(blob[_LEN.size:].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FrameError(f"frame body is not UTF-8 JSON: {exc}") from exc
    if not isinstance(body, dict) or "kind" not in body:
        raise FrameError("frame body must be an object with a 'kind' field")
    if body["kind"] not in FRAME_KINDS:
        raise FrameError(f"unknown frame kind {body['kind']!r}")
    return body


class FrameReader:
    """Incremental decoder for a persistent byte stream of frames."""

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[dict]:
        """Append stream bytes; return every frame completed by them."""
        self._buf.extend(data)
        frames = []
        while True:
            if len(self._buf) < _LEN.size:
                break
            (length,) = _LEN.unpack_from(self._buf)
            end = _LEN.size + length
            if len(self._buf) < end:
                break
            frames.append(decode_frame(bytes(self._buf[:end])))
            del self._buf[:end]
        return frames

    @property
    def pending_bytes(self) -> int:
        return len(self._buf)
