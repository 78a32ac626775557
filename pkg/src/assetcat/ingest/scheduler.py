"""Fixed-cadence job scheduling against an injectable clock.

Defaults: ingest every 24 h, refresh every 12 h. A job type never
overlaps itself — while a run is active, a due occurrence is recorded as
a deferral and starts on a later tick once the predecessor completes.
When the clock jumps across several missed intervals, the missed
occurrences collapse into a single run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Callable

from ..timeutil import Clock

INGEST_JOB = "ingest"
REFRESH_JOB = "refresh"

DEFAULT_INTERVALS = {
    INGEST_JOB: timedelta(hours=24),
    REFRESH_JOB: timedelta(hours=12),
}


@dataclass
class Deferral:
    job_type: str
    due_at: datetime
    deferred_at: datetime


@dataclass
class _Schedule:
    job_type: str
    interval: timedelta
    next_due: datetime
    running: bool = False
    trigger_count: int = 0
    deferrals: list[Deferral] = field(default_factory=list)


class Scheduler:
    """Tracks due-ness per job type; callers run the triggered jobs."""

    def __init__(
        self,
        clock: Clock,
        intervals: dict[str, timedelta] | None = None,
        start: datetime | None = None,
    ):
        self._clock = clock
        start = start or clock.now()
        self._schedules: dict[str, _Schedule] = {}
        for job_type, interval in (intervals or DEFAULT_INTERVALS).items():
            # First occurrence one full interval after start.
            self._schedules[job_type] = _Schedule(
                job_type=job_type, interval=interval, next_due=start + interval
            )

    def tick(self) -> list[str]:
        """Job types due now and not already running; marks them running.

        The caller must invoke complete() when each returned job finishes.
        """
        now = self._clock.now()
        triggered: list[str] = []
        for schedule in self._schedules.values():
            if now < schedule.next_due:
                continue
            if schedule.running:
                schedule.deferrals.append(
                    Deferral(job_type=schedule.job_type, due_at=schedule.next_due, deferred_at=now)
                )
                continue
            schedule.running = True
            schedule.trigger_count += 1
            triggered.append(schedule.job_type)
            while schedule.next_due <= now:
                schedule.next_due += schedule.interval
        return triggered

    def complete(self, job_type: str) -> None:
        self._schedules[job_type].running = False

    def run_pending(self, runners: dict[str, Callable[[], object]]) -> list[tuple[str, object]]:
        """Tick and synchronously run every triggered job."""
        results = []
        for job_type in self.tick():
            try:
                results.append((job_type, runners[job_type]()))
            finally:
                self.complete(job_type)
        return results

    def is_running(self, job_type: str) -> bool:
        return self._schedules[job_type].running

    def trigger_count(self, job_type: str) -> int:
        return self._schedules[job_type].trigger_count

    def deferrals(self, job_type: str) -> list[Deferral]:
        return list(self._schedules[job_type].deferrals)

    def next_due(self, job_type: str) -> datetime:
        return self._schedules[job_type].next_due
