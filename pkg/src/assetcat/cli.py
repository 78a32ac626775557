"""Service binary.

    assetcat --config providers.json --fixture-mode --run-once ingest
    assetcat --config providers.json --port 8080 --bind 0.0.0.0

Without --run-once the process migrates the store, starts the background
scheduler (daily ingest, twelve-hourly refresh), and serves the HTTP API.
"""

from __future__ import annotations

import argparse
import logging
import sys
import threading
from pathlib import Path

from .api.app import create_app
from .catalog.taxonomy import load_seed_taxonomy, load_taxonomy_file
from .config import (
    build_providers,
    cors_origins_from_env,
    db_path_from_env,
    load_provider_configs,
)
from .ingest.pipeline import IngestionService
from .ingest.scheduler import INGEST_JOB, REFRESH_JOB, Scheduler
from .leaderboard.metrics import default_registry, load_registry_file
from .store.db import Database
from .timeutil import SystemClock
from .workspace.service import Workspace

logger = logging.getLogger(__name__)

SCHEDULER_TICK_SECONDS = 30.0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assetcat", description=__doc__)
    parser.add_argument("--config", type=Path, help="provider config file (JSON array)")
    parser.add_argument(
        "--fixture-mode",
        action="store_true",
        help="run offline: only fixture providers are used",
    )
    parser.add_argument(
        "--run-once",
        choices=[INGEST_JOB, REFRESH_JOB],
        help="run one job manually and exit",
    )
    parser.add_argument("--db", default=None, help="store path (default: $ASSETCAT_DB)")
    parser.add_argument("--taxonomy", type=Path, help="taxonomy file (default: packaged seed)")
    parser.add_argument("--metrics-registry", type=Path, help="metric registry file")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--bind", default="127.0.0.1")
    parser.add_argument("--no-scheduler", action="store_true", help="serve without background jobs")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def bootstrap(args: argparse.Namespace):
    """Wire store, providers, workspace, and the ingestion service."""
    clock = SystemClock()
    db = Database(args.db or db_path_from_env())
    db.migrate()

    taxonomy = load_taxonomy_file(args.taxonomy) if args.taxonomy else load_seed_taxonomy()
    db.replace_taxonomy(taxonomy)
    registry = (
        load_registry_file(args.metrics_registry) if args.metrics_registry else default_registry()
    )

    providers, limiters = [], {}
    if args.config:
        configs = load_provider_configs(args.config)
        providers, limiters = build_providers(
            configs, fixture_mode=args.fixture_mode, clock=clock, config_dir=args.config.parent
        )
    workspace = Workspace(db, clock=clock)
    ingestion = IngestionService(
        db,
        providers,
        registry,
        taxonomy=taxonomy,
        clock=clock,
        limiters=limiters,
        workspace=workspace,
    )
    return db, registry, workspace, ingestion, clock


def _scheduler_loop(scheduler: Scheduler, ingestion: IngestionService, stop: threading.Event):
    runners = {
        INGEST_JOB: ingestion.run_ingestion,
        REFRESH_JOB: ingestion.run_metrics_refresh,
    }
    while not stop.is_set():
        try:
            scheduler.run_pending(runners)
        except Exception:
            logger.exception("scheduled job failed")
        stop.wait(SCHEDULER_TICK_SECONDS)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    db, registry, workspace, ingestion, clock = bootstrap(args)

    if args.run_once:
        runner = (
            ingestion.run_ingestion if args.run_once == INGEST_JOB else ingestion.run_metrics_refresh
        )
        run = runner()
        print(
            f"{run.job_type}: seen={run.assets_seen} catalogued={run.assets_catalogued}"
            f" skipped={run.assets_skipped} errors={len(run.errors)}"
        )
        return 0

    app = create_app(
        db,
        registry=registry,
        workspace=workspace,
        ingestion=ingestion,
        cors_origins=cors_origins_from_env(),
    )
    stop = threading.Event()
    if not args.no_scheduler:
        scheduler = Scheduler(clock)
        thread = threading.Thread(
            target=_scheduler_loop, args=(scheduler, ingestion, stop), daemon=True
        )
        thread.start()

    import uvicorn

    try:
        uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    finally:
        stop.set()
    return 0


if __name__ == "__main__":
    sys.exit(main())
