"""Relational persistence with migrations and snapshot-consistent reads."""

from .db import Batch, Database, LATEST_VERSION, MIGRATIONS, StoredJobRun, new_id

__all__ = ["Batch", "Database", "LATEST_VERSION", "MIGRATIONS", "StoredJobRun", "new_id"]
