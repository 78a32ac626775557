"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the report lines.
Everything runs offline against the shipped fixture corpora.
"""

from __future__ import annotations

import functools
import json
import random
import time
from itertools import combinations

import pytest
from fastapi.testclient import TestClient

from assetcat.api.app import create_app
from assetcat.catalog.classify import (
    classify_with_matches,
    detect_lexical_outliers,
    similarity_text,
)
from assetcat.catalog.dedup import deduplicate
from assetcat.catalog.taxonomy import load_seed_taxonomy
from assetcat.catalog.types import AssetKind
from assetcat.catalog.vectors import DocumentVector, VectorSpace, cosine_similarity
from assetcat.ingest.pipeline import IngestionService
from assetcat.ingest.providers import FixtureProvider
from assetcat.ingest.ratelimit import RateBudget, TokenBucket
from assetcat.ingest.scheduler import INGEST_JOB, REFRESH_JOB, Scheduler
from assetcat.leaderboard.cardparse import parse_eval_metadata, split_front_matter
from assetcat.leaderboard.metrics import default_registry
from assetcat.leaderboard.queries import rank
from assetcat.leaderboard.types import LeaderboardQuery
from assetcat.search.exports import CSV_COLUMNS, ExportFormat, export
from assetcat.search.filters import FilterQuery, Page, match_set
from assetcat.store.db import Database
from assetcat.timeutil import EPOCH, VirtualClock, parse_rfc3339

from .conftest import FIXTURES_DIR, REGISTRY_FIXTURE, T0, make_model, ts
from .filter_oracle import oracle_match_ids, random_corpus, random_filter_query
from .oracles import closure_groups, cohens_kappa, max_grants_in_window
from .test_leaderboard_parse import _record_dict


def criterion(number: int, title: str):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\n[FAIL] criterion {number}: {title}")
                raise
            print(f"\n[PASS] criterion {number}: {title}")

        return wrapper

    return decorate


def build_catalogue(tmp_path, with_preferences: bool = False):
    """Ingest the shipped fixture registry into a fresh store."""
    clock = VirtualClock(ts(2025, 1, 1))
    db = Database(tmp_path / "acceptance.db")
    db.migrate()
    taxonomy = load_seed_taxonomy()
    db.replace_taxonomy(taxonomy)
    provider = FixtureProvider("hub", REGISTRY_FIXTURE, clock=clock)
    registry = default_registry()
    from assetcat.workspace.service import Workspace

    workspace = Workspace(db, clock=clock)
    user = None
    if with_preferences:
        user = workspace.register("accept@example.org", "longenoughsecret")
        workspace.replace_preferences(
            user, [{"type": "leaderboard", "query": {"benchmark": "HumanEval"}}]
        )
    service = IngestionService(
        db, [provider], registry, taxonomy=taxonomy, clock=clock, workspace=workspace
    )
    return db, service, workspace, user, registry, clock


@pytest.fixture(scope="module")
def catalogue(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("acceptance-catalogue")
    db, service, workspace, _, registry, _ = build_catalogue(tmp_path)
    service.run_ingestion()
    return db, registry


@criterion(1, "filter-oracle equivalence on 1,000 random queries over 200 assets")
def test_criterion_1_filter_oracle_equivalence():
    rng = random.Random(20_260_811)
    snapshot = random_corpus(rng, 200)
    started = time.monotonic()
    disagreements = 0
    for _ in range(1000):
        query = random_filter_query(rng)
        got = {a.asset_id for a in match_set(query, snapshot)}
        if got != oracle_match_ids(query, snapshot):
            disagreements += 1
    elapsed = time.monotonic() - started
    assert disagreements == 0, f"{disagreements} of 1000 queries disagreed with the oracle"
    assert elapsed < 60.0, f"equivalence sweep took {elapsed:.1f}s (budget 60s)"


@criterion(2, "25-card parsing corpus matches hand labels exactly")
def test_criterion_2_leaderboard_parsing_corpus():
    registry = default_registry()
    cards_dir = FIXTURES_DIR / "leaderboard_cards"
    expected = json.loads((cards_dir / "expected.json").read_text(encoding="utf-8"))
    assert len(expected) == 25
    for name, want in sorted(expected.items()):
        metadata, _ = split_front_matter((cards_dir / name).read_text(encoding="utf-8"))
        records = parse_eval_metadata(metadata, f"hub/{name}", registry, T0)
        sort_key = lambda r: (r["benchmark"], r["metric_name"], r["implementation"] or "",
                              r["metric_config"] or "")
        got = sorted((_record_dict(r) for r in records), key=sort_key)
        assert got == sorted(want, key=sort_key), f"field mismatch on {name}"
        if not want:
            assert records == [], f"{name}: fabricated records from a malformed block"


@criterion(3, "ranking equals comparator-sort oracle; search invariance on 500 pairs")
def test_criterion_3_ranking_contract():
    from .oracles import rank_oracle

    registry = default_registry()
    rng = random.Random(314)
    query = LeaderboardQuery(benchmark="HumanEval", metric_name="pass@1")

    def random_snapshot(size: int):
        snapshot = []
        for i in range(size):
            asset = make_model(
                asset_id=f"hub/r{i:03d}",
                name=rng.choice(["Atlas", "atlas", "Bolt", "nova", "Nova", "gpt-ish"]) + f"-{i % 9}",
                likes=rng.choice([0, 2, 5, 5, 9]),
            )
            from .conftest import make_eval

            asset.model.eval_records = [
                make_eval(asset.asset_id, score=rng.choice([0.25, 0.5, 0.5, 0.75, 0.9]))
            ]
            snapshot.append(asset)
        return snapshot

    for _ in range(20):
        snapshot = random_snapshot(rng.randint(5, 50))
        ranking = rank(query, snapshot, registry)
        rows = [
            {
                "asset_id": a.asset_id,
                "name": a.name,
                "score": a.model.eval_records[0].score,
                "likes": a.popularity.likes,
            }
            for a in snapshot
        ]
        assert [e.asset_id for e in ranking.entries] == rank_oracle(rows, True)
        assert [e.rank for e in ranking.entries] == list(range(1, len(snapshot) + 1))

    checked_pairs = 0
    while checked_pairs < 500:
        snapshot = random_snapshot(rng.randint(10, 40))
        base = {e.asset_id: e.rank for e in rank(query, snapshot, registry).entries}
        for _ in range(25):
            needle = rng.choice(["a", "bolt", "Nova", "gpt", "9", "zz", ""])
            searched = rank(
                LeaderboardQuery(
                    benchmark="HumanEval", metric_name="pass@1", name_search=needle or None
                ),
                snapshot,
                registry,
            )
            for entry in searched.entries:
                assert base[entry.asset_id] == entry.rank
            checked_pairs += 1


@criterion(4, "dedup grouping equals transitive-closure oracle; similarity edge cases")
def test_criterion_4_dedup_correctness():
    from .test_dedup import _vectors, planted_cluster_assets

    assets = planted_cluster_assets()
    vectors = _vectors(assets)
    ids = [a.asset_id for a in assets]
    similarity = {
        (x, y): cosine_similarity(vectors[x], vectors[y]) for x, y in combinations(ids, 2)
    }
    created = {a.asset_id: a.created_at for a in assets}
    expected = closure_groups(ids, similarity, 0.95, created)
    actual = sorted(
        ((g.canonical_id, g.member_ids) for g in deduplicate(assets, vectors, 0.95)),
        key=lambda g: g[0],
    )
    assert actual == expected
    assert sorted(len(m) for _, m in actual) == [1, 1, 1, 3]

    # Self-similarity within 1e-12; disjoint vocabularies exactly 0.0.
    space = VectorSpace().fit(["alpha beta gamma", "delta epsilon"])
    vec = space.vectorize("alpha beta gamma alpha")
    assert abs(cosine_similarity(vec, vec) - 1.0) < 1e-12
    disjoint_a = DocumentVector.from_weights({"alpha": 1.2, "beta": 0.4})
    disjoint_b = DocumentVector.from_weights({"gamma": 2.0})
    assert cosine_similarity(disjoint_a, disjoint_b) == 0.0


@criterion(5, "50-asset classification fixture reproduces gold labels, kappa >= 0.8")
def test_criterion_5_classification_kappa():
    corpus = json.loads(
        (FIXTURES_DIR / "classification_corpus.json").read_text(encoding="utf-8")
    )
    gold = {aid: set(tasks) for aid, tasks in corpus["gold"].items()}
    taxonomy = load_seed_taxonomy()
    assets = {
        item["asset_id"]: make_model(
            asset_id=item["asset_id"], card_text=item["card"], ml_tasks=set(item["tags"])
        )
        for item in corpus["assets"]
    }
    assert len(assets) == 50

    space = VectorSpace().fit([similarity_text(a) for a in assets.values()])
    vectors = {aid: space.vectorize(similarity_text(a)) for aid, a in assets.items()}
    cohorts: dict[str, list] = {}
    ambiguous = []
    predicted: dict[str, set] = {aid: set() for aid in assets}
    for aid, asset in assets.items():
        for match in classify_with_matches(asset, taxonomy):
            if match.ambiguous_only:
                ambiguous.append((asset, match.assignment))
            else:
                predicted[aid].add(match.assignment.task_id)
                cohorts.setdefault(match.assignment.task_id, []).append(vectors[aid])
    partition = detect_lexical_outliers(ambiguous, vectors, cohorts)
    for asset, assignment in partition.kept:
        predicted[asset.asset_id].add(assignment.task_id)

    task_ids = [t.task_id for t in taxonomy]
    gold_flat, predicted_flat = [], []
    for aid in assets:
        for task in task_ids:
            gold_flat.append(task in gold[aid])
            predicted_flat.append(task in predicted[aid])
    kappa = cohens_kappa(gold_flat, predicted_flat)
    assert kappa >= 0.8, f"kappa {kappa:.3f} below the 0.8 gate"
    # The fixture must exercise both ambiguous paths.
    assert any(d.kept for d in partition.decisions if not d.insufficient_context)
    assert any(not d.kept for d in partition.decisions)


@criterion(6, "48h virtual clock: 2 ingest + 4 refresh, no overlap; re-ingest adds nothing")
def test_criterion_6_scheduler_and_idempotency(tmp_path):
    db, service, workspace, user, _, clock = build_catalogue(tmp_path, with_preferences=True)
    scheduler = Scheduler(clock)
    counts = {INGEST_JOB: 0, REFRESH_JOB: 0}
    active = {INGEST_JOB: 0, REFRESH_JOB: 0}

    def runner(job_type):
        def run():
            active[job_type] += 1
            assert active[job_type] == 1, f"overlapping {job_type} runs"
            counts[job_type] += 1
            result = (
                service.run_ingestion() if job_type == INGEST_JOB else service.run_metrics_refresh()
            )
            active[job_type] -= 1
            return result

        return run

    runners = {INGEST_JOB: runner(INGEST_JOB), REFRESH_JOB: runner(REFRESH_JOB)}
    for _ in range(48):
        clock.advance(3600)
        scheduler.run_pending(runners)
    assert counts[INGEST_JOB] == 2
    assert counts[REFRESH_JOB] == 4

    rows_before = len(db.snapshot())
    notifications_before, _ = workspace.notifications(user, limit=1000)
    rerun = service.run_ingestion(since=EPOCH)
    assert rerun.assets_catalogued == 0
    assert len(db.snapshot()) == rows_before
    notifications_after, _ = workspace.notifications(user, limit=1000)
    assert notifications_after == notifications_before
    assert notifications_before > 0  # the preference did fire on first ingest


@criterion(7, "rate budget: no 60s window ever exceeds max_requests_per_minute + burst")
def test_criterion_7_rate_budget_safety():
    rng = random.Random(777)
    for budget in (RateBudget(60, 10), RateBudget(120, 20), RateBudget(30, 5)):
        clock = VirtualClock()
        bucket = TokenBucket(budget, clock)
        grants: list[float] = []
        while clock.monotonic() < 600.0:
            burst = rng.choice([0, 1, 2, 5, 12, 40])
            for _ in range(burst):
                if bucket.try_acquire() == 0.0:
                    grants.append(clock.monotonic())
            clock.advance(rng.uniform(0.01, 4.0))
        limit = budget.max_requests_per_minute + budget.burst
        worst = max_grants_in_window(grants, 60.0)
        assert worst <= limit, f"budget {budget}: {worst} grants in a 60s window (cap {limit})"
        assert len(grants) > budget.burst  # the workload actually exercised refills


@criterion(8, "exports: JSON round-trip, CSV dialect conformance, byte-identical repeats")
def test_criterion_8_export_round_trip_and_determinism(catalogue):
    db, registry = catalogue
    snapshot = db.snapshot()
    for kind in AssetKind:
        query = FilterQuery(kind=kind, page=Page(limit=500))

        payload, _ = export(query, snapshot, ExportFormat.JSON, registry)
        parsed = json.loads(payload.decode("utf-8"))
        by_id = {record["asset_id"]: record for record in parsed}
        matched = {a.asset_id: a for a in match_set(query, snapshot)}
        assert set(by_id) == set(matched)
        for asset_id, record in by_id.items():
            asset = matched[asset_id]
            assert record["name"] == asset.name
            assert record["downloads"] == asset.popularity.downloads
            assert record["likes"] == asset.popularity.likes
            assert record["commits"] == asset.activity.commits
            assert record["contributors"] == asset.activity.contributors
            assert sorted(record["licenses"]) == sorted(asset.licenses)
            assert parse_rfc3339(record["created_at"]) == asset.created_at
            assert [t["task_id"] for t in record["se_tasks"]] == [
                t.task_id for t in asset.se_tasks
            ]

        import csv as csv_module
        import io

        payload, _ = export(query, snapshot, ExportFormat.CSV, registry)
        text = payload.decode("utf-8")
        assert text.endswith("\r\n")
        rows = list(csv_module.reader(io.StringIO(text)))
        assert rows[0] == CSV_COLUMNS
        assert all(len(row) == len(CSV_COLUMNS) for row in rows)
        assert len(rows) - 1 == len(matched)

        for fmt in ExportFormat:
            first, _ = export(query, snapshot, fmt, registry)
            second, _ = export(query, snapshot, fmt, registry)
            assert first == second, f"{kind.value}/{fmt.value} export not byte-identical"


@criterion(9, "reference engineer workflow end-to-end at the API level")
def test_criterion_9_workflow_end_to_end(catalogue):
    db, registry = catalogue
    app = create_app(db, registry=registry)
    client = TestClient(app)

    response = client.get(
        "/api/v1/leaderboard",
        params={
            "benchmark": "HumanEval",
            "implementation": "Explain",
            "language": "C++",
            "metric": "pass@1",
        },
    )
    assert response.status_code == 200
    entries = response.json()["entries"]
    assert entries, "workflow leaderboard query returned no rows"
    scores = [e["score"] for e in entries]
    assert scores == sorted(scores, reverse=True)
    assert [e["rank"] for e in entries] == list(range(1, len(entries) + 1))
    assert [(e["asset_id"], e["score"]) for e in entries] == [
        ("hub/charlie-complete", 0.47),
        ("hub/alpha-code-gen", 0.41),
        ("hub/bravo-coder", 0.38),
        ("hub/charlie-complete", 0.29),
    ]

    response = client.get(
        "/api/v1/datasets",
        params=[
            ("natural_language", "en"),
            ("modality", "Text"),
            ("size_rows_bucket", "100M-1B"),
            ("downloads_from", "10"),
        ],
    )
    assert response.status_code == 200
    body = response.json()
    returned = {item["asset_id"] for item in body["items"]}
    assert returned == {"hub/india-docstrings", "hub/juliet-codegen-corpus"}
    assert body["total_matching"] == 2
