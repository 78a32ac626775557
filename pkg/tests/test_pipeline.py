"""Ingestion and refresh jobs over the file-backed fixture registry."""

from __future__ import annotations

import pytest

from assetcat.catalog.taxonomy import load_seed_taxonomy
from assetcat.ingest.pipeline import IngestionService
from assetcat.ingest.providers import FixtureProvider, ProviderMetrics
from assetcat.ingest.ratelimit import RateBudget, TokenBucket
from assetcat.leaderboard.metrics import default_registry
from assetcat.store.db import Database
from assetcat.timeutil import VirtualClock
from assetcat.workspace.service import Workspace

from .conftest import REGISTRY_FIXTURE, ts

CLOCK_START = ts(2025, 1, 1)


@pytest.fixture()
def service(tmp_path):
    clock = VirtualClock(CLOCK_START)
    db = Database(tmp_path / "pipeline.db")
    db.migrate()
    taxonomy = load_seed_taxonomy()
    db.replace_taxonomy(taxonomy)
    provider = FixtureProvider("hub", REGISTRY_FIXTURE, clock=clock)
    workspace = Workspace(db, clock=clock)
    svc = IngestionService(
        db,
        [provider],
        default_registry(),
        taxonomy=taxonomy,
        clock=clock,
        workspace=workspace,
    )
    svc.provider = provider
    svc.workspace_handle = workspace
    return svc


def test_fixture_snapshot_counts(service):
    # 15 raw assets; 9 carry SE-matching documentation (hand-derived by
    # running the classification rules over each fixture card).
    run = service.run_ingestion()
    assert run.assets_seen == 15
    assert run.assets_catalogued == 9
    assert run.assets_skipped == 6
    reasons = {e["asset"]: e["reason"] for e in run.errors}
    assert reasons["hub/foxtrot-empty"] == "missing-documentation"
    assert reasons["hub/golf-bugguide"] == "lexical-outlier"
    assert reasons["hub/echo-sentiment"] == "not-se-relevant"


def test_second_run_is_idempotent(service):
    service.run_ingestion()
    before = {a.asset_id: a for a in service.db.snapshot()}
    run = service.run_ingestion(since=ts(1970, 1, 1))
    assert run.assets_catalogued == 0
    after = {a.asset_id: a for a in service.db.snapshot()}
    assert set(after) == set(before)
    for asset_id, asset in after.items():
        assert asset == before[asset_id]


def test_watermark_advances_so_incremental_run_sees_nothing(service):
    service.run_ingestion()
    run = service.run_ingestion()  # watermark: nothing newer in the fixture
    assert run.assets_seen == 0
    assert run.assets_catalogued == 0


def test_outlier_rejected_asset_never_persisted(service):
    service.run_ingestion()
    assert service.db.get_asset("hub/golf-bugguide") is None


def test_front_matter_stripped_from_stored_card(service):
    service.run_ingestion()
    asset = service.db.get_asset("hub/alpha-code-gen")
    assert "model-index" not in asset.card_text
    assert asset.card_text.startswith("# alpha-code-gen")
    assert asset.abstract_text and "alpha-code-gen" in asset.abstract_text


def test_rationales_are_substrings_of_documentation(service):
    service.run_ingestion()
    for asset in service.db.snapshot():
        documentation = asset.extension_documentation()
        for assignment in asset.se_tasks:
            assert assignment.rationale in documentation, (
                asset.asset_id,
                assignment.task_id,
                assignment.rationale,
            )


def test_refresh_updates_only_dynamic_fields(service):
    service.run_ingestion()
    before = service.db.get_asset("hub/alpha-code-gen")
    service.provider.metric_overrides["alpha-code-gen"] = ProviderMetrics(
        downloads=before.popularity.downloads,
        likes=7,
        commits=before.activity.commits,
        contributors=before.activity.contributors,
        as_of=ts(2025, 1, 2),
    )
    run = service.run_metrics_refresh()
    assert run.job_type == "refresh"
    after = service.db.get_asset("hub/alpha-code-gen")
    assert after.popularity.likes == 7
    assert after.last_refreshed_at == ts(2025, 1, 2)
    assert after.popularity.downloads == before.popularity.downloads
    assert after.card_text == before.card_text
    assert after.se_tasks == before.se_tasks
    assert after.created_at == before.created_at


def test_refresh_with_identical_metrics_advances_timestamp_only(service):
    service.run_ingestion()
    before = {a.asset_id: a for a in service.db.snapshot()}
    service.clock.advance(3600)
    service.run_metrics_refresh()
    for asset_id, after in ((a.asset_id, a) for a in service.db.snapshot()):
        prev = before[asset_id]
        assert after.last_refreshed_at >= prev.last_refreshed_at
        after.last_refreshed_at = prev.last_refreshed_at
        assert after == prev


def test_refresh_matches_mock_provider_table(service, tmp_path):
    service.run_ingestion()
    table = {}
    for index, asset in enumerate(service.db.snapshot()):
        slug = asset.asset_id.removeprefix("hub/")
        table[asset.asset_id] = ProviderMetrics(
            downloads=1000 + index,
            likes=10 + index,
            commits=50 + index,
            contributors=5 + index,
            as_of=ts(2025, 2, 1),
        )
        service.provider.metric_overrides[slug] = table[asset.asset_id]
    run = service.run_metrics_refresh()
    assert run.assets_seen == len(table)
    assert run.assets_skipped == 0
    for asset in service.db.snapshot():
        expected = table[asset.asset_id]
        assert asset.popularity.downloads == expected.downloads
        assert asset.popularity.likes == expected.likes
        assert asset.activity.commits == expected.commits
        assert asset.activity.contributors == expected.contributors


def test_vanished_asset_marked_stale_after_two_failures(service):
    service.run_ingestion()
    service.provider.unavailable_refs.add("alpha-code-gen")
    first = service.run_metrics_refresh()
    assert any(e["asset"] == "hub/alpha-code-gen" for e in first.errors)
    assert service.db.get_asset("hub/alpha-code-gen").stale is False
    service.run_metrics_refresh()
    assert service.db.get_asset("hub/alpha-code-gen").stale is True
    # Rows are flagged, never deleted.
    assert service.db.get_asset("hub/alpha-code-gen") is not None


def test_alerts_created_for_matching_preferences_once(service):
    workspace = service.workspace_handle
    user = workspace.register("dev@example.org", "hunter2hunter2")
    workspace.replace_preferences(
        user,
        [
            {"type": "leaderboard", "query": {"benchmark": "HumanEval"}},
            {
                "type": "filter",
                "query": {"kind": "dataset", "dataset_only": {"modalities": ["Text"]},
                          "natural_languages": ["en"]},
            },
        ],
    )
    service.run_ingestion()
    total, items = workspace.notifications(user, limit=100)
    by_pref: dict[str, set[str]] = {}
    for note in items:
        by_pref.setdefault(note.preference_id, set()).add(note.asset_id)
    benchmark_hits = [
        assets for assets in by_pref.values() if "hub/alpha-code-gen" in assets
    ]
    # HumanEval reporters: alpha, bravo, charlie.
    assert benchmark_hits
    assert benchmark_hits[0] == {
        "hub/alpha-code-gen", "hub/bravo-coder", "hub/charlie-complete"
    }
    # English Text datasets: india, juliet, kilo, lima.
    dataset_sets = [assets for assets in by_pref.values() if "hub/india-docstrings" in assets]
    assert dataset_sets and len(dataset_sets[0]) == 4

    # Re-running the same snapshot produces no new notifications.
    service.run_ingestion(since=ts(1970, 1, 1))
    total_after, _ = workspace.notifications(user, limit=100)
    assert total_after == total


def test_rate_limited_ingestion_still_completes(tmp_path):
    clock = VirtualClock(CLOCK_START)
    db = Database(tmp_path / "limited.db")
    db.migrate()
    taxonomy = load_seed_taxonomy()
    db.replace_taxonomy(taxonomy)
    provider = FixtureProvider("hub", REGISTRY_FIXTURE, clock=clock)
    # Generous refill so the blocking acquire path is exercised without
    # slowing the suite down.
    limiter = TokenBucket(RateBudget(max_requests_per_minute=600000, burst=5), clock=None)
    svc = IngestionService(
        db, [provider], default_registry(), taxonomy=taxonomy, clock=clock,
        limiters={"hub": limiter},
    )
    run = svc.run_ingestion()
    assert run.assets_seen == 15
    assert run.assets_catalogued == 9
