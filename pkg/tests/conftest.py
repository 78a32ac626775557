"""Shared fixtures and asset factories."""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

import pytest

from assetcat.catalog.types import (
    ActivityMetrics,
    AssetKind,
    AssetRecord,
    DatasetExtension,
    ModelExtension,
    PopularityMetrics,
    SizeRowsBucket,
)
from assetcat.leaderboard.types import EvalRecord

TESTS_DIR = Path(__file__).parent
REPO_ROOT = TESTS_DIR.parent
FIXTURES_DIR = TESTS_DIR / "fixtures"
REGISTRY_FIXTURE = REPO_ROOT / "fixtures" / "registry"

T0 = datetime(2024, 1, 1, tzinfo=timezone.utc)


def ts(year=2024, month=1, day=1, hour=0, minute=0, second=0) -> datetime:
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)


def make_model(
    asset_id: str = "hub/model-a",
    name: str | None = None,
    created_at: datetime | None = None,
    card_text: str = "A model card.",
    downloads: int = 0,
    likes: int = 0,
    commits: int = 0,
    contributors: int = 0,
    evals: list[EvalRecord] | None = None,
    parameter_count: int | None = None,
    **kwargs,
) -> AssetRecord:
    created_at = created_at or T0
    return AssetRecord(
        asset_id=asset_id,
        kind=AssetKind.MODEL,
        name=name or asset_id.split("/", 1)[-1],
        provider=asset_id.split("/", 1)[0],
        repo_url=f"https://example.org/{asset_id}",
        created_at=created_at,
        last_refreshed_at=kwargs.pop("last_refreshed_at", created_at),
        popularity=PopularityMetrics(downloads=downloads, likes=likes),
        activity=ActivityMetrics(commits=commits, contributors=contributors),
        card_text=card_text,
        model=ModelExtension(eval_records=evals or [], parameter_count=parameter_count),
        **kwargs,
    )


def make_dataset(
    asset_id: str = "hub/dataset-a",
    name: str | None = None,
    created_at: datetime | None = None,
    card_text: str = "A dataset card.",
    downloads: int = 0,
    likes: int = 0,
    bucket: SizeRowsBucket = SizeRowsBucket.B100K_1M,
    modalities: set[str] | None = None,
    formats: set[str] | None = None,
    disciplines: set[str] | None = None,
    **kwargs,
) -> AssetRecord:
    created_at = created_at or T0
    return AssetRecord(
        asset_id=asset_id,
        kind=AssetKind.DATASET,
        name=name or asset_id.split("/", 1)[-1],
        provider=asset_id.split("/", 1)[0],
        repo_url=f"https://example.org/{asset_id}",
        created_at=created_at,
        last_refreshed_at=kwargs.pop("last_refreshed_at", created_at),
        popularity=PopularityMetrics(downloads=downloads, likes=likes),
        card_text=card_text,
        dataset=DatasetExtension(
            size_rows_bucket=bucket,
            modalities=modalities or {"Text"},
            formats=formats or {"parquet"},
            disciplines=disciplines or set(),
        ),
        **kwargs,
    )


def make_eval(
    asset_id: str,
    benchmark: str = "HumanEval",
    metric: str = "pass@1",
    score: float = 0.5,
    implementation: str | None = None,
    language: str | None = None,
    metric_config: str | None = None,
    reported_at: datetime | None = None,
) -> EvalRecord:
    return EvalRecord(
        asset_id=asset_id,
        benchmark=benchmark,
        metric_name=metric,
        score=score,
        implementation=implementation,
        language=language,
        metric_config=metric_config,
        reported_at=reported_at or T0,
    )


@pytest.fixture()
def seed_taxonomy():
    from assetcat.catalog.taxonomy import load_seed_taxonomy

    return load_seed_taxonomy()


@pytest.fixture()
def registry():
    from assetcat.leaderboard.metrics import default_registry

    return default_registry()


@pytest.fixture()
def db(tmp_path):
    from assetcat.store.db import Database

    database = Database(tmp_path / "test.db")
    database.migrate()
    return database
