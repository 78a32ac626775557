"""Relational store for the catalogue and workspace.

Desk-scale default is embedded SQLite behind this small interface; the
schema (docs/schema.md) mirrors the domain invariants with enforced
foreign keys and uniqueness constraints. Writes are serialized through a
single-writer lock and grouped into batches, each one transaction, so
readers never observe a half-applied ingestion batch (WAL mode gives
every read its own consistent snapshot). Card texts are stored
zlib-compressed next to the extracted fields so assets can be
reclassified without refetching.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import uuid
import zlib
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Iterator

from ..catalog.types import (
    ActivityMetrics,
    AssetKind,
    AssetRecord,
    DatasetExtension,
    ModelExtension,
    PopularityMetrics,
    SETaskAssignment,
    SizeRowsBucket,
    TaxonomyEntry,
)
from ..catalog.taxonomy import load_taxonomy
from ..errors import ConstraintViolation, MigrationConflict, StoreUnavailable
from ..leaderboard.types import EvalRecord
from ..timeutil import Clock, SystemClock, parse_rfc3339, to_rfc3339

MIGRATIONS: list[str] = [
    # v1: full schema. Later migrations append ALTER/CREATE statements.
    """
    CREATE TABLE assets (
        asset_id TEXT PRIMARY KEY,
        kind TEXT NOT NULL CHECK (kind IN ('model', 'dataset')),
        name TEXT NOT NULL,
        provider TEXT NOT NULL,
        repo_url TEXT NOT NULL,
        created_at TEXT NOT NULL,
        last_refreshed_at TEXT NOT NULL,
        licenses TEXT NOT NULL DEFAULT '[]',
        libraries TEXT NOT NULL DEFAULT '[]',
        natural_languages TEXT NOT NULL DEFAULT '[]',
        ml_tasks TEXT NOT NULL DEFAULT '[]',
        downloads INTEGER NOT NULL DEFAULT 0 CHECK (downloads >= 0),
        likes INTEGER NOT NULL DEFAULT 0 CHECK (likes >= 0),
        commits INTEGER NOT NULL DEFAULT 0 CHECK (commits >= 0),
        contributors INTEGER NOT NULL DEFAULT 0 CHECK (contributors >= 0),
        card_text_gz BLOB NOT NULL,
        abstract_text TEXT,
        duplicate_of TEXT REFERENCES assets (asset_id),
        stale INTEGER NOT NULL DEFAULT 0,
        failed_refreshes INTEGER NOT NULL DEFAULT 0,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE model_extensions (
        asset_id TEXT PRIMARY KEY REFERENCES assets (asset_id) ON DELETE CASCADE,
        size_bytes INTEGER NOT NULL DEFAULT 0 CHECK (size_bytes >= 0),
        region TEXT,
        training_datasets TEXT NOT NULL DEFAULT '[]',
        inference_providers TEXT NOT NULL DEFAULT '[]',
        parameter_count INTEGER,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE dataset_extensions (
        asset_id TEXT PRIMARY KEY REFERENCES assets (asset_id) ON DELETE CASCADE,
        size_rows_bucket TEXT NOT NULL,
        formats TEXT NOT NULL DEFAULT '[]',
        modalities TEXT NOT NULL DEFAULT '[]',
        disciplines TEXT NOT NULL DEFAULT '[]',
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE taxonomy_entries (
        task_id TEXT PRIMARY KEY,
        task_name TEXT NOT NULL,
        sdlc_stage TEXT NOT NULL,
        lexicon TEXT NOT NULL,
        ambiguity_terms TEXT NOT NULL DEFAULT '[]',
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE se_task_assignments (
        asset_id TEXT NOT NULL REFERENCES assets (asset_id) ON DELETE CASCADE,
        task_id TEXT NOT NULL REFERENCES taxonomy_entries (task_id),
        confidence REAL NOT NULL CHECK (confidence >= 0.0 AND confidence <= 1.0),
        rationale TEXT NOT NULL,
        low_confidence INTEGER NOT NULL DEFAULT 0,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL,
        PRIMARY KEY (asset_id, task_id)
    );
    CREATE TABLE eval_records (
        id INTEGER PRIMARY KEY,
        asset_id TEXT NOT NULL REFERENCES assets (asset_id) ON DELETE CASCADE,
        benchmark TEXT NOT NULL,
        implementation TEXT NOT NULL DEFAULT '',
        language TEXT NOT NULL DEFAULT '',
        metric_name TEXT NOT NULL,
        metric_config TEXT NOT NULL DEFAULT '',
        score REAL NOT NULL,
        reported_at TEXT NOT NULL,
        percent_normalized INTEGER NOT NULL DEFAULT 0,
        unrecognized_metric INTEGER NOT NULL DEFAULT 0,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL,
        UNIQUE (asset_id, benchmark, implementation, language, metric_name, metric_config)
    );
    CREATE TABLE users (
        user_id TEXT PRIMARY KEY,
        email TEXT NOT NULL UNIQUE,
        credential_hash TEXT NOT NULL,
        created_at TEXT NOT NULL,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE sessions (
        token_hash TEXT PRIMARY KEY,
        user_id TEXT NOT NULL REFERENCES users (user_id) ON DELETE CASCADE,
        expires_at TEXT NOT NULL,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE saved_lists (
        list_id TEXT PRIMARY KEY,
        owner TEXT NOT NULL REFERENCES users (user_id) ON DELETE CASCADE,
        title TEXT NOT NULL,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL,
        UNIQUE (owner, title)
    );
    CREATE TABLE list_items (
        list_id TEXT NOT NULL REFERENCES saved_lists (list_id) ON DELETE CASCADE,
        asset_id TEXT NOT NULL REFERENCES assets (asset_id),
        position INTEGER NOT NULL,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL,
        PRIMARY KEY (list_id, asset_id)
    );
    CREATE TABLE preferences (
        preference_id TEXT PRIMARY KEY,
        owner TEXT NOT NULL REFERENCES users (user_id) ON DELETE CASCADE,
        criteria TEXT NOT NULL,
        invalid_flag INTEGER NOT NULL DEFAULT 0,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE notifications (
        notification_id TEXT PRIMARY KEY,
        owner TEXT NOT NULL REFERENCES users (user_id) ON DELETE CASCADE,
        asset_id TEXT NOT NULL REFERENCES assets (asset_id),
        preference_id TEXT NOT NULL REFERENCES preferences (preference_id) ON DELETE CASCADE,
        created_at TEXT NOT NULL,
        read INTEGER NOT NULL DEFAULT 0,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL,
        UNIQUE (preference_id, asset_id)
    );
    CREATE TABLE job_runs (
        job_id TEXT PRIMARY KEY,
        job_type TEXT NOT NULL CHECK (job_type IN ('ingest', 'refresh')),
        started_at TEXT NOT NULL,
        finished_at TEXT NOT NULL,
        assets_seen INTEGER NOT NULL DEFAULT 0,
        assets_catalogued INTEGER NOT NULL DEFAULT 0,
        assets_skipped INTEGER NOT NULL DEFAULT 0,
        errors TEXT NOT NULL DEFAULT '[]',
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL
    );
    CREATE TABLE provider_watermarks (
        provider_id TEXT NOT NULL,
        kind TEXT NOT NULL,
        watermark TEXT NOT NULL,
        row_created_at TEXT NOT NULL,
        row_updated_at TEXT NOT NULL,
        PRIMARY KEY (provider_id, kind)
    );
    CREATE INDEX idx_assets_kind ON assets (kind);
    CREATE INDEX idx_eval_benchmark ON eval_records (benchmark);
    CREATE INDEX idx_assignments_task ON se_task_assignments (task_id);
    CREATE INDEX idx_notifications_owner ON notifications (owner);
    """,
]

LATEST_VERSION = len(MIGRATIONS)


def _statements(script: str) -> list[str]:
    """Split a migration script into single statements (executescript would
    implicitly commit the surrounding transaction)."""
    statements = []
    buffer = ""
    for line in script.splitlines():
        buffer += line + "\n"
        if sqlite3.complete_statement(buffer):
            statements.append(buffer.strip())
            buffer = ""
    if buffer.strip():
        statements.append(buffer.strip())
    return statements


def _dump_set(values: set[str]) -> str:
    return json.dumps(sorted(values))


def _load_set(raw: str) -> set[str]:
    return set(json.loads(raw))


@dataclass
class StoredJobRun:
    job_id: str
    job_type: str
    started_at: datetime
    finished_at: datetime
    assets_seen: int = 0
    assets_catalogued: int = 0
    assets_skipped: int = 0
    errors: list[dict] = field(default_factory=list)


class Database:
    """SQLite-backed store. Path ":memory:" keeps one shared connection
    and is only suitable for single-threaded use."""

    def __init__(self, path: str | Path = ":memory:", clock: Clock | None = None):
        self._path = str(path)
        self._clock = clock or SystemClock()
        self._write_lock = threading.RLock()
        self._memory = self._path == ":memory:"
        self._shared: sqlite3.Connection | None = self._open() if self._memory else None

    # -- connections -------------------------------------------------------

    def _open(self) -> sqlite3.Connection:
        try:
            conn = sqlite3.connect(self._path, timeout=30.0, check_same_thread=False)
        except sqlite3.Error as exc:
            raise StoreUnavailable(f"cannot open store at {self._path}: {exc}") from exc
        conn.row_factory = sqlite3.Row
        conn.isolation_level = None  # manual BEGIN/COMMIT
        conn.execute("PRAGMA foreign_keys = ON")
        if not self._memory:
            conn.execute("PRAGMA journal_mode = WAL")
            conn.execute("PRAGMA synchronous = NORMAL")
        return conn

    @contextmanager
    def _reader(self) -> Iterator[sqlite3.Connection]:
        """Connection pinned to one consistent snapshot for its lifetime."""
        if self._shared is not None:
            yield self._shared
            return
        conn = self._open()
        try:
            conn.execute("BEGIN")
            yield conn
            conn.execute("COMMIT")
        finally:
            conn.close()

    @contextmanager
    def batch(self) -> Iterator[Batch]:
        """One write transaction; all-or-nothing visibility to readers."""
        with self._write_lock:
            conn = self._shared if self._shared is not None else self._open()
            try:
                conn.execute("BEGIN IMMEDIATE")
                handle = Batch(conn, self._now_str)
                yield handle
                conn.execute("COMMIT")
            except sqlite3.IntegrityError as exc:
                conn.execute("ROLLBACK")
                raise ConstraintViolation(str(exc)) from exc
            except Exception:
                conn.execute("ROLLBACK")
                raise
            finally:
                if conn is not self._shared:
                    conn.close()

    def _now_str(self) -> str:
        return to_rfc3339(self._clock.now())

    # -- migrations --------------------------------------------------------

    def schema_version(self) -> int:
        with self._reader() as conn:
            row = conn.execute(
                "SELECT name FROM sqlite_master WHERE type = 'table' AND name = 'schema_migrations'"
            ).fetchone()
            if row is None:
                return 0
            version = conn.execute("SELECT MAX(version) AS v FROM schema_migrations").fetchone()
            return version["v"] or 0

    def migrate(self, target: int | None = None) -> int:
        """Apply ordered migrations up to target (default: latest).

        Idempotent; requesting a version below the applied one raises
        MigrationConflict (downgrades are not supported).
        """
        target = LATEST_VERSION if target is None else target
        if target > LATEST_VERSION:
            raise MigrationConflict(f"unknown schema version {target} (latest {LATEST_VERSION})")
        with self._write_lock:
            conn = self._shared if self._shared is not None else self._open()
            try:
                conn.execute(
                    "CREATE TABLE IF NOT EXISTS schema_migrations ("
                    "version INTEGER PRIMARY KEY, applied_at TEXT NOT NULL)"
                )
                row = conn.execute("SELECT MAX(version) AS v FROM schema_migrations").fetchone()
                current = row["v"] or 0
                if target < current:
                    raise MigrationConflict(
                        f"store is at schema version {current}; cannot downgrade to {target}"
                    )
                for version in range(current + 1, target + 1):
                    conn.execute("BEGIN IMMEDIATE")
                    for statement in _statements(MIGRATIONS[version - 1]):
                        conn.execute(statement)
                    conn.execute(
                        "INSERT INTO schema_migrations (version, applied_at) VALUES (?, ?)",
                        (version, self._now_str()),
                    )
                    conn.execute("COMMIT")
                return max(current, target)
            finally:
                if conn is not self._shared:
                    conn.close()

    # -- taxonomy ----------------------------------------------------------

    def replace_taxonomy(self, entries: list[TaxonomyEntry]) -> None:
        with self.batch() as b:
            b.replace_taxonomy(entries)

    def load_taxonomy_entries(self) -> list[TaxonomyEntry]:
        with self._reader() as conn:
            rows = conn.execute("SELECT * FROM taxonomy_entries ORDER BY task_id").fetchall()
        payload = [
            {
                "task_id": r["task_id"],
                "task_name": r["task_name"],
                "sdlc_stage": r["sdlc_stage"],
                "lexicon": json.loads(r["lexicon"]),
                "ambiguity_terms": json.loads(r["ambiguity_terms"]),
            }
            for r in rows
        ]
        return load_taxonomy(json.dumps(payload))

    # -- assets ------------------------------------------------------------

    def upsert_asset(self, record: AssetRecord) -> str:
        with self.batch() as b:
            return b.upsert_asset(record)

    def get_asset(self, asset_id: str) -> AssetRecord | None:
        with self._reader() as conn:
            row = conn.execute("SELECT * FROM assets WHERE asset_id = ?", (asset_id,)).fetchone()
            if row is None:
                return None
            return self._assemble(conn, [row])[0]

    def snapshot(self) -> list[AssetRecord]:
        """All assets (including duplicate-flagged ones) from one
        consistent point in time, ordered by asset_id."""
        with self._reader() as conn:
            rows = conn.execute("SELECT * FROM assets ORDER BY asset_id").fetchall()
            return self._assemble(conn, rows)

    def asset_ids(self) -> list[str]:
        with self._reader() as conn:
            rows = conn.execute("SELECT asset_id FROM assets ORDER BY asset_id").fetchall()
        return [r["asset_id"] for r in rows]

    def _assemble(self, conn: sqlite3.Connection, rows: list[sqlite3.Row]) -> list[AssetRecord]:
        ids = [r["asset_id"] for r in rows]
        if not ids:
            return []
        placeholders = ",".join("?" for _ in ids)
        models = {
            r["asset_id"]: r
            for r in conn.execute(
                f"SELECT * FROM model_extensions WHERE asset_id IN ({placeholders})", ids
            )
        }
        datasets = {
            r["asset_id"]: r
            for r in conn.execute(
                f"SELECT * FROM dataset_extensions WHERE asset_id IN ({placeholders})", ids
            )
        }
        assignments: dict[str, list[SETaskAssignment]] = {}
        for r in conn.execute(
            f"SELECT * FROM se_task_assignments WHERE asset_id IN ({placeholders})"
            " ORDER BY confidence DESC, task_id",
            ids,
        ):
            assignments.setdefault(r["asset_id"], []).append(
                SETaskAssignment(
                    task_id=r["task_id"],
                    confidence=r["confidence"],
                    rationale=r["rationale"],
                    low_confidence=bool(r["low_confidence"]),
                )
            )
        evals: dict[str, list[EvalRecord]] = {}
        for r in conn.execute(
            f"SELECT * FROM eval_records WHERE asset_id IN ({placeholders}) ORDER BY id", ids
        ):
            evals.setdefault(r["asset_id"], []).append(
                EvalRecord(
                    asset_id=r["asset_id"],
                    benchmark=r["benchmark"],
                    implementation=r["implementation"] or None,
                    language=r["language"] or None,
                    metric_name=r["metric_name"],
                    metric_config=r["metric_config"] or None,
                    score=r["score"],
                    reported_at=parse_rfc3339(r["reported_at"]),
                    percent_normalized=bool(r["percent_normalized"]),
                    unrecognized_metric=bool(r["unrecognized_metric"]),
                )
            )

        records = []
        for row in rows:
            asset_id = row["asset_id"]
            kind = AssetKind(row["kind"])
            model = None
            dataset = None
            if kind is AssetKind.MODEL:
                ext = models.get(asset_id)
                model = ModelExtension(
                    size_bytes=ext["size_bytes"] if ext else 0,
                    region=ext["region"] if ext else None,
                    training_datasets=_load_set(ext["training_datasets"]) if ext else set(),
                    inference_providers=_load_set(ext["inference_providers"]) if ext else set(),
                    parameter_count=ext["parameter_count"] if ext else None,
                    eval_records=evals.get(asset_id, []),
                )
            else:
                ext = datasets.get(asset_id)
                dataset = DatasetExtension(
                    size_rows_bucket=SizeRowsBucket(ext["size_rows_bucket"])
                    if ext
                    else SizeRowsBucket.LT_1K,
                    formats=_load_set(ext["formats"]) if ext else set(),
                    modalities=_load_set(ext["modalities"]) if ext else set(),
                    disciplines=_load_set(ext["disciplines"]) if ext else set(),
                )
            records.append(
                AssetRecord(
                    asset_id=asset_id,
                    kind=kind,
                    name=row["name"],
                    provider=row["provider"],
                    repo_url=row["repo_url"],
                    created_at=parse_rfc3339(row["created_at"]),
                    last_refreshed_at=parse_rfc3339(row["last_refreshed_at"]),
                    licenses=_load_set(row["licenses"]),
                    libraries=_load_set(row["libraries"]),
                    natural_languages=_load_set(row["natural_languages"]),
                    ml_tasks=_load_set(row["ml_tasks"]),
                    se_tasks=assignments.get(asset_id, []),
                    popularity=PopularityMetrics(downloads=row["downloads"], likes=row["likes"]),
                    activity=ActivityMetrics(
                        commits=row["commits"], contributors=row["contributors"]
                    ),
                    card_text=zlib.decompress(row["card_text_gz"]).decode("utf-8"),
                    abstract_text=row["abstract_text"],
                    model=model,
                    dataset=dataset,
                    duplicate_of=row["duplicate_of"],
                    stale=bool(row["stale"]),
                )
            )
        return records

    # -- job runs / watermarks ----------------------------------------------

    def record_job_run(self, run: StoredJobRun) -> None:
        with self.batch() as b:
            b.record_job_run(run)

    def list_job_runs(self) -> list[StoredJobRun]:
        with self._reader() as conn:
            rows = conn.execute("SELECT * FROM job_runs ORDER BY started_at, job_id").fetchall()
        return [
            StoredJobRun(
                job_id=r["job_id"],
                job_type=r["job_type"],
                started_at=parse_rfc3339(r["started_at"]),
                finished_at=parse_rfc3339(r["finished_at"]),
                assets_seen=r["assets_seen"],
                assets_catalogued=r["assets_catalogued"],
                assets_skipped=r["assets_skipped"],
                errors=json.loads(r["errors"]),
            )
            for r in rows
        ]

    def get_watermark(self, provider_id: str, kind: AssetKind) -> datetime | None:
        with self._reader() as conn:
            row = conn.execute(
                "SELECT watermark FROM provider_watermarks WHERE provider_id = ? AND kind = ?",
                (provider_id, kind.value),
            ).fetchone()
        return parse_rfc3339(row["watermark"]) if row else None

    # -- generic helpers used by the workspace layer ------------------------

    def query(self, sql: str, params: tuple = ()) -> list[sqlite3.Row]:
        with self._reader() as conn:
            return conn.execute(sql, params).fetchall()

    def count(self, sql: str, params: tuple = ()) -> int:
        rows = self.query(sql, params)
        return rows[0][0] if rows else 0


class Batch:
    """Write handle bound to one open transaction."""

    def __init__(self, conn: sqlite3.Connection, now_str):
        self._conn = conn
        self._now = now_str

    def execute(self, sql: str, params: tuple = ()) -> sqlite3.Cursor:
        return self._conn.execute(sql, params)

    # -- assets -------------------------------------------------------------

    def has_asset(self, asset_id: str) -> bool:
        row = self._conn.execute(
            "SELECT 1 FROM assets WHERE asset_id = ?", (asset_id,)
        ).fetchone()
        return row is not None

    def upsert_asset(self, record: AssetRecord) -> str:
        """Insert or update one asset; assignments and eval records are
        replaced atomically with the asset row."""
        record.validate()
        now = self._now()
        card_gz = zlib.compress(record.card_text.encode("utf-8"), level=6)
        self._conn.execute(
            """
            INSERT INTO assets (
                asset_id, kind, name, provider, repo_url, created_at, last_refreshed_at,
                licenses, libraries, natural_languages, ml_tasks,
                downloads, likes, commits, contributors,
                card_text_gz, abstract_text, duplicate_of, stale,
                row_created_at, row_updated_at
            ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            ON CONFLICT (asset_id) DO UPDATE SET
                name = excluded.name,
                provider = excluded.provider,
                repo_url = excluded.repo_url,
                created_at = excluded.created_at,
                last_refreshed_at = excluded.last_refreshed_at,
                licenses = excluded.licenses,
                libraries = excluded.libraries,
                natural_languages = excluded.natural_languages,
                ml_tasks = excluded.ml_tasks,
                downloads = excluded.downloads,
                likes = excluded.likes,
                commits = excluded.commits,
                contributors = excluded.contributors,
                card_text_gz = excluded.card_text_gz,
                abstract_text = excluded.abstract_text,
                duplicate_of = excluded.duplicate_of,
                stale = excluded.stale,
                row_updated_at = excluded.row_updated_at
            """,
            (
                record.asset_id,
                record.kind.value,
                record.name,
                record.provider,
                record.repo_url,
                to_rfc3339(record.created_at),
                to_rfc3339(record.last_refreshed_at),
                _dump_set(record.licenses),
                _dump_set(record.libraries),
                _dump_set(record.natural_languages),
                _dump_set(record.ml_tasks),
                record.popularity.downloads,
                record.popularity.likes,
                record.activity.commits,
                record.activity.contributors,
                card_gz,
                record.abstract_text,
                record.duplicate_of,
                int(record.stale),
                now,
                now,
            ),
        )
        if record.model is not None:
            self._conn.execute(
                """
                INSERT INTO model_extensions (
                    asset_id, size_bytes, region, training_datasets, inference_providers,
                    parameter_count, row_created_at, row_updated_at
                ) VALUES (?, ?, ?, ?, ?, ?, ?, ?)
                ON CONFLICT (asset_id) DO UPDATE SET
                    size_bytes = excluded.size_bytes,
                    region = excluded.region,
                    training_datasets = excluded.training_datasets,
                    inference_providers = excluded.inference_providers,
                    parameter_count = excluded.parameter_count,
                    row_updated_at = excluded.row_updated_at
                """,
                (
                    record.asset_id,
                    record.model.size_bytes,
                    record.model.region,
                    _dump_set(record.model.training_datasets),
                    _dump_set(record.model.inference_providers),
                    record.model.parameter_count,
                    now,
                    now,
                ),
            )
        if record.dataset is not None:
            self._conn.execute(
                """
                INSERT INTO dataset_extensions (
                    asset_id, size_rows_bucket, formats, modalities, disciplines,
                    row_created_at, row_updated_at
                ) VALUES (?, ?, ?, ?, ?, ?, ?)
                ON CONFLICT (asset_id) DO UPDATE SET
                    size_rows_bucket = excluded.size_rows_bucket,
                    formats = excluded.formats,
                    modalities = excluded.modalities,
                    disciplines = excluded.disciplines,
                    row_updated_at = excluded.row_updated_at
                """,
                (
                    record.asset_id,
                    record.dataset.size_rows_bucket.value,
                    _dump_set(record.dataset.formats),
                    _dump_set(record.dataset.modalities),
                    _dump_set(record.dataset.disciplines),
                    now,
                    now,
                ),
            )

        self._conn.execute(
            "DELETE FROM se_task_assignments WHERE asset_id = ?", (record.asset_id,)
        )
        for assignment in record.se_tasks:
            self._conn.execute(
                """
                INSERT INTO se_task_assignments (
                    asset_id, task_id, confidence, rationale, low_confidence,
                    row_created_at, row_updated_at
                ) VALUES (?, ?, ?, ?, ?, ?, ?)
                """,
                (
                    record.asset_id,
                    assignment.task_id,
                    assignment.confidence,
                    assignment.rationale,
                    int(assignment.low_confidence),
                    now,
                    now,
                ),
            )

        self._conn.execute("DELETE FROM eval_records WHERE asset_id = ?", (record.asset_id,))
        for eval_record in record.model.eval_records if record.model else []:
            self._conn.execute(
                """
                INSERT INTO eval_records (
                    asset_id, benchmark, implementation, language, metric_name, metric_config,
                    score, reported_at, percent_normalized, unrecognized_metric,
                    row_created_at, row_updated_at
                ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
                """,
                (
                    record.asset_id,
                    eval_record.benchmark,
                    eval_record.implementation or "",
                    eval_record.language or "",
                    eval_record.metric_name,
                    eval_record.metric_config or "",
                    eval_record.score,
                    to_rfc3339(eval_record.reported_at),
                    int(eval_record.percent_normalized),
                    int(eval_record.unrecognized_metric),
                    now,
                    now,
                ),
            )
        return record.asset_id

    def set_duplicate_of(self, asset_id: str, canonical_id: str | None) -> None:
        self._conn.execute(
            "UPDATE assets SET duplicate_of = ?, row_updated_at = ? WHERE asset_id = ?",
            (canonical_id, self._now(), asset_id),
        )

    def update_metrics(
        self,
        asset_id: str,
        downloads: int,
        likes: int,
        commits: int,
        contributors: int,
        refreshed_at: datetime,
    ) -> None:
        """Refresh path: writable fields are exactly the four dynamic
        counters plus last_refreshed_at (and the staleness bookkeeping)."""
        self._conn.execute(
            """
            UPDATE assets SET downloads = ?, likes = ?, commits = ?, contributors = ?,
                last_refreshed_at = ?, stale = 0, failed_refreshes = 0, row_updated_at = ?
            WHERE asset_id = ?
            """,
            (downloads, likes, commits, contributors, to_rfc3339(refreshed_at), self._now(), asset_id),
        )

    def mark_refresh_failure(self, asset_id: str, stale_after: int = 2) -> None:
        self._conn.execute(
            """
            UPDATE assets SET failed_refreshes = failed_refreshes + 1,
                stale = CASE WHEN failed_refreshes + 1 >= ? THEN 1 ELSE stale END,
                row_updated_at = ?
            WHERE asset_id = ?
            """,
            (stale_after, self._now(), asset_id),
        )

    # -- taxonomy -----------------------------------------------------------

    def replace_taxonomy(self, entries: list[TaxonomyEntry]) -> None:
        now = self._now()
        for entry in entries:
            self._conn.execute(
                """
                INSERT INTO taxonomy_entries (
                    task_id, task_name, sdlc_stage, lexicon, ambiguity_terms,
                    row_created_at, row_updated_at
                ) VALUES (?, ?, ?, ?, ?, ?, ?)
                ON CONFLICT (task_id) DO UPDATE SET
                    task_name = excluded.task_name,
                    sdlc_stage = excluded.sdlc_stage,
                    lexicon = excluded.lexicon,
                    ambiguity_terms = excluded.ambiguity_terms,
                    row_updated_at = excluded.row_updated_at
                """,
                (
                    entry.task_id,
                    entry.task_name,
                    entry.sdlc_stage.value,
                    json.dumps(entry.lexicon),
                    json.dumps(entry.ambiguity_terms),
                    now,
                    now,
                ),
            )

    # -- job runs / watermarks ------------------------------------------------

    def record_job_run(self, run: StoredJobRun) -> None:
        now = self._now()
        self._conn.execute(
            """
            INSERT INTO job_runs (
                job_id, job_type, started_at, finished_at,
                assets_seen, assets_catalogued, assets_skipped, errors,
                row_created_at, row_updated_at
            ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """,
            (
                run.job_id,
                run.job_type,
                to_rfc3339(run.started_at),
                to_rfc3339(run.finished_at),
                run.assets_seen,
                run.assets_catalogued,
                run.assets_skipped,
                json.dumps(run.errors),
                now,
                now,
            ),
        )

    def set_watermark(self, provider_id: str, kind: AssetKind, watermark: datetime) -> None:
        now = self._now()
        self._conn.execute(
            """
            INSERT INTO provider_watermarks (provider_id, kind, watermark, row_created_at, row_updated_at)
            VALUES (?, ?, ?, ?, ?)
            ON CONFLICT (provider_id, kind) DO UPDATE SET
                watermark = excluded.watermark, row_updated_at = excluded.row_updated_at
            """,
            (provider_id, kind.value, to_rfc3339(watermark), now, now),
        )


def new_id() -> str:
    return uuid.uuid4().hex
