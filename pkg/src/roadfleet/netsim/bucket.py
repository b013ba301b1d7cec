"""Token-bucket shaping primitive."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import FrameTooLarge


@dataclass(frozen=True)
class ShapeResult:
    granted: bool
    eligible_at: float | None = None  # set when queued


class TokenBucket:
    """Byte bucket refilled at `rate` bytes/second, saturating at `burst`.

    Starts full. Refill is computed lazily from the elapsed time, so the
    bucket needs no timer of its own.
    """

    def __init__(self, rate: float, burst: float | None = None, now: float = 0.0):
        if rate <= 0:
            raise ValueError("rate must be > 0")
        self.rate = float(rate)
        self.burst = float(burst) if burst is not None else float(rate)  # 1 s of rate
        if self.burst <= 0:
            raise ValueError("burst must be > 0")
        self.tokens = self.burst
        self.last_refill = now

    def _refill(self, now: float) -> None:
        if now > self.last_refill:
            self.tokens = min(self.burst, self.tokens + self.rate * (now - self.last_refill))
            self.last_refill = now

    def peek_eligible_at(self, nbytes: int, now: float) -> float:
        """Earliest time nbytes could be granted, without consuming tokens.

        Exact only if nothing else consumes from the bucket in between.
        """
        if nbytes > self.burst:
            raise FrameTooLarge(f"{nbytes} bytes > burst {self.burst:.0f}")
        self._refill(now)
        if self.tokens >= nbytes:
            return now
        return now + (nbytes - self.tokens) / self.rate

    def shape(self, nbytes: int, now: float) -> ShapeResult:
        """Consume tokens for nbytes, or report when they would suffice.

        QUEUED consumes nothing; callers retry at eligible_at.
        """
        if nbytes <= 0:
            raise ValueError("nbytes must be > 0")
        if nbytes > self.burst:
            raise FrameTooLarge(f"{nbytes} bytes > burst {self.burst:.0f}")
        self._refill(now)
        if self.tokens >= nbytes:
            self.tokens -= nbytes
            return ShapeResult(granted=True)
        return ShapeResult(granted=False,
                           eligible_at=now + (nbytes - self.tokens) / self.rate)

    def consume(self, nbytes: int, now: float) -> None:
        """Unconditionally take nbytes (caller has already checked eligibility)."""
        self._refill(now)
        self.tokens -= nbytes
        if self.tokens < -1e-9:
            raise AssertionError("bucket overdrawn; admission logic is broken")
        self.tokens = max(self.tokens, 0.0)
