"""Token-bucket rate limiting for provider API calls.

Capacity equals the configured burst; tokens refill continuously at
max_requests_per_minute / 60 per second. Callers either get a permit or
the exact wait until one is available, so granted requests in any
60-second window never exceed max_requests_per_minute + burst.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

from ..errors import RateBudgetExhausted, ValidationError
from ..timeutil import Clock, SystemClock

DEFAULT_BUDGET_RPM = 120
DEFAULT_BUDGET_BURST = 20


@dataclass(frozen=True)
class RateBudget:
    max_requests_per_minute: int = DEFAULT_BUDGET_RPM
    burst: int = DEFAULT_BUDGET_BURST

    def validate(self) -> None:
        if self.max_requests_per_minute <= 0 or self.burst <= 0:
            raise ValidationError("rate budget values must be positive")


class TokenBucket:
    """Thread-safe token bucket driven by an injectable clock."""

    def __init__(self, budget: RateBudget, clock: Clock | None = None):
        budget.validate()
        self.budget = budget
        self._clock = clock or SystemClock()
        self._capacity = float(budget.burst)
        self._refill_rate = budget.max_requests_per_minute / 60.0
        self._tokens = self._capacity  # start full
        self._lock = threading.Lock()
        self._last_refill = self._clock.monotonic()

    def _refill(self) -> None:
        now = self._clock.monotonic()
        elapsed = now - self._last_refill
        if elapsed > 0:
            self._tokens = min(self._capacity, self._tokens + elapsed * self._refill_rate)
            self._last_refill = now

    def try_acquire(self) -> float:
        """Consume one token if available; otherwise return the exact wait
        in seconds until a token will be available (0.0 means granted)."""
        with self._lock:
            self._refill()
            if self._tokens >= 1.0:
                self._tokens -= 1.0
                return 0.0
            return (1.0 - self._tokens) / self._refill_rate

    def acquire(self, max_wait: float | None = None) -> None:
        """Block (wall-clock sleep) until a permit is granted.

        Raises RateBudgetExhausted when the wait would exceed max_wait.
        Use try_acquire with a virtual clock in simulations.
        """
        while True:
            wait = self.try_acquire()
            if wait <= 0.0:
                return
            if max_wait is not None and wait > max_wait:
                raise RateBudgetExhausted(
                    f"no request permit available for {wait:.2f}s", retry_after=wait
                )
            time.sleep(wait)


def acquire_request_permit(bucket: TokenBucket) -> float:
    """Spec-level entry point: 0.0 when a permit was granted, otherwise the
    exact wait until one becomes available."""
    return bucket.try_acquire()
