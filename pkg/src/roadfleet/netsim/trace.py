"""Line-oriented event trace with a digest for reproducibility checks."""

from __future__ import annotations

import hashlib

from .clock import VirtualClock


class TraceLog:
    """Collects "t=<seconds> EVENT <kind> <attrs>" lines in event order."""

    def __init__(self, clock: VirtualClock):
        self.clock = clock
        self.lines: list[str] = []

    def __call__(self, kind: str, /, **attrs) -> None:
        parts = " ".join(f"{k}={attrs[k]}" for k in sorted(attrs))
        line = f"t={self.clock.now:.6f} EVENT {kind}"
        if parts:
            line += " " + parts
        self.lines.append(line)

    def digest(self) -> str:
        h = hashlib.sha256()
        for line in self.lines:
            h.update(line.encode("utf-8"))
            h.update(b"\n")
        return h.hexdigest()

    def render(self) -> str:
        """Full trace text: every line plus the trailing digest line."""
        return "\n".join(self.lines + [f"digest sha256={self.digest()}"]) + "\n"


def parse_trace(text: str) -> tuple[list[str], str | None]:
    """Split trace text into event lines and the recorded digest (if any)."""
    lines = [ln for ln in text.splitlines() if ln]
    digest = None
    if lines and lines[-1].startswith("digest sha256="):
        digest = lines.pop().split("=", 1)[1]
    return lines, digest


def digest_of(lines: list[str]) -> str:
    h = hashlib.sha256()
    for line in lines:
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()
