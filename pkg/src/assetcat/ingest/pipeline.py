"""End-to-end ingestion and metrics-refresh jobs.

run_ingestion lists new assets from every registered provider, classifies
their documentation against the taxonomy, rejects lexical outliers,
deduplicates by cosine similarity, extracts leaderboard evaluations, and
persists the batch in one transaction — then evaluates workspace alert
preferences against the newly catalogued assets. Re-running on the same
snapshot adds nothing. run_metrics_refresh touches only the dynamic
fields (downloads, likes, commits, contributors, last_refreshed_at).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import datetime
from typing import Any

from ..catalog.classify import (
    TaskMatch,
    classify_with_matches,
    detect_lexical_outliers,
    similarity_text,
)
from ..catalog.dedup import DEFAULT_DEDUP_THRESHOLD, apply_duplicate_marks, deduplicate
from ..catalog.types import (
    ActivityMetrics,
    AssetKind,
    AssetRecord,
    DatasetExtension,
    ModelExtension,
    PopularityMetrics,
    SizeRowsBucket,
    TaxonomyEntry,
)
from ..catalog.vectors import VectorSpace
from ..errors import AssetCatError, MissingDocumentation, ProviderUnavailable, RateBudgetExhausted
from ..leaderboard.cardparse import parse_eval_metadata, split_front_matter
from ..leaderboard.metrics import MetricRegistry
from ..store.db import Database, StoredJobRun, new_id
from ..timeutil import Clock, EPOCH, SystemClock, parse_rfc3339
from .providers import AssetRef, ProviderClient, RawAssetDoc
from .ratelimit import TokenBucket
from .scheduler import INGEST_JOB, REFRESH_JOB

logger = logging.getLogger(__name__)

JobRun = StoredJobRun

SKIP_MISSING_DOCUMENTATION = "missing-documentation"
SKIP_NOT_SE_RELEVANT = "not-se-relevant"
SKIP_LEXICAL_OUTLIER = "lexical-outlier"
SKIP_ALREADY_CATALOGUED = "already-catalogued"
SKIP_PROVIDER_ERROR = "provider-error"
SKIP_INVALID_METADATA = "invalid-metadata"


@dataclass
class PipelineSettings:
    dedup_threshold: float = DEFAULT_DEDUP_THRESHOLD
    outlier_floor: float = 0.05
    stale_after_failures: int = 2


@dataclass
class Candidate:
    record: AssetRecord
    matches: list[TaskMatch]
    eval_source: Any = None


def build_asset(doc: RawAssetDoc, abstract: str | None) -> tuple[AssetRecord, Any]:
    """Construct a candidate AssetRecord from one raw provider document.

    Returns the record plus the evaluation block feeding the leaderboard
    parser: the card's front matter when present, otherwise the provider
    metadata's card_metadata field. The stored card text excludes the
    front matter.
    """
    metadata = doc.metadata
    front_matter, body = split_front_matter(doc.card_text)
    kind = doc.ref.kind
    created_at = parse_rfc3339(metadata["created_at"])

    model = None
    dataset = None
    if kind is AssetKind.MODEL:
        raw = metadata.get("model", {})
        model = ModelExtension(
            size_bytes=int(raw.get("size_bytes", 0)),
            region=raw.get("region"),
            training_datasets=set(raw.get("training_datasets", [])),
            inference_providers=set(raw.get("inference_providers", [])),
            parameter_count=raw.get("parameter_count"),
        )
    else:
        raw = metadata.get("dataset", {})
        dataset = DatasetExtension(
            size_rows_bucket=SizeRowsBucket(raw.get("size_rows_bucket", "<1K")),
            formats=set(raw.get("formats", [])),
            modalities=set(raw.get("modalities", [])),
            disciplines=set(raw.get("disciplines", [])),
        )

    record = AssetRecord(
        asset_id=doc.asset_id,
        kind=kind,
        name=metadata.get("name", doc.ref.ref),
        provider=doc.ref.provider_id,
        repo_url=metadata.get("repo_url", ""),
        created_at=created_at,
        last_refreshed_at=max(created_at, doc.fetched_at),
        licenses=set(metadata.get("licenses", [])),
        libraries=set(metadata.get("libraries", [])),
        natural_languages=set(metadata.get("natural_languages", [])),
        ml_tasks=set(metadata.get("ml_tasks", [])),
        popularity=PopularityMetrics(
            downloads=int(metadata.get("downloads", 0)), likes=int(metadata.get("likes", 0))
        ),
        activity=ActivityMetrics(
            commits=int(metadata.get("commits", 0)),
            contributors=int(metadata.get("contributors", 0)),
        ),
        card_text=body,
        abstract_text=abstract,
        model=model,
        dataset=dataset,
    )
    eval_source = front_matter if front_matter and "model-index" in front_matter else None
    if eval_source is None:
        eval_source = metadata.get("card_metadata")
    return record, eval_source


class IngestionService:
    """Owns the single-writer ingestion path for one store."""

    def __init__(
        self,
        db: Database,
        providers: list[ProviderClient],
        registry: MetricRegistry,
        taxonomy: list[TaxonomyEntry] | None = None,
        settings: PipelineSettings | None = None,
        clock: Clock | None = None,
        limiters: dict[str, TokenBucket] | None = None,
        workspace=None,
    ):
        self.db = db
        self.providers = providers
        self.registry = registry
        self.settings = settings or PipelineSettings()
        self.clock = clock or SystemClock()
        self.limiters = limiters or {}
        self.workspace = workspace
        self._taxonomy = taxonomy

    @property
    def taxonomy(self) -> list[TaxonomyEntry]:
        if self._taxonomy is None:
            self._taxonomy = self.db.load_taxonomy_entries()
        return self._taxonomy

    def _permit(self, provider_id: str) -> None:
        bucket = self.limiters.get(provider_id)
        if bucket is not None:
            bucket.acquire()

    # -- ingestion ----------------------------------------------------------

    def run_ingestion(self, since: datetime | None = None) -> JobRun:
        started = self.clock.now()
        run = JobRun(
            job_id=new_id(), job_type=INGEST_JOB, started_at=started, finished_at=started
        )
        skipped: list[tuple[str, str]] = []

        docs, watermarks = self._collect_raw_docs(since, run, skipped)
        candidates = self._classify_candidates(docs, skipped)

        candidate_ids = {c.record.asset_id for c in candidates}
        existing = [a for a in self.db.snapshot() if a.asset_id not in candidate_ids]
        existing_ids = set(self.db.asset_ids())

        catalogued = self._resolve_ambiguities(candidates, existing, skipped)
        new_assets = [c.record for c in catalogued if c.record.asset_id not in existing_ids]
        for candidate in catalogued:
            if candidate.record.asset_id in existing_ids:
                skipped.append((candidate.record.asset_id, SKIP_ALREADY_CATALOGUED))

        for candidate in catalogued:
            record = candidate.record
            if record.model is not None and candidate.eval_source is not None:
                record.model.eval_records = parse_eval_metadata(
                    candidate.eval_source, record.asset_id, self.registry, self.clock.now()
                )

        # Dedup runs over the union of the surviving catalogue and this batch.
        survivors = [c.record for c in catalogued]
        all_assets = existing + survivors
        space = VectorSpace().fit([similarity_text(a) for a in all_assets])
        vectors = {a.asset_id: space.vectorize(similarity_text(a)) for a in all_assets}
        groups = deduplicate(all_assets, vectors, self.settings.dedup_threshold)
        previous_marks = {a.asset_id: a.duplicate_of for a in existing}
        apply_duplicate_marks(all_assets, groups)

        notified = 0
        with self.db.batch() as batch:
            for record in survivors:
                batch.upsert_asset(record)
            for asset in existing:
                if previous_marks[asset.asset_id] != asset.duplicate_of:
                    batch.set_duplicate_of(asset.asset_id, asset.duplicate_of)
            for (provider_id, kind), watermark in watermarks.items():
                batch.set_watermark(provider_id, kind, watermark)
            if self.workspace is not None and new_assets:
                notified = self.workspace.match_alerts(batch, new_assets)
            run.assets_catalogued = len(new_assets)
            run.assets_skipped = len(skipped)
            for asset_id, reason in skipped:
                run.errors.append({"asset": asset_id, "reason": reason})
            run.finished_at = self.clock.now()
            batch.record_job_run(run)
        logger.info(
            "ingestion %s: seen=%d catalogued=%d skipped=%d notifications=%d",
            run.job_id,
            run.assets_seen,
            run.assets_catalogued,
            run.assets_skipped,
            notified,
        )
        return run

    def _collect_raw_docs(
        self,
        since: datetime | None,
        run: JobRun,
        skipped: list[tuple[str, str]],
    ) -> tuple[list[tuple[RawAssetDoc, str | None]], dict[tuple[str, AssetKind], datetime]]:
        docs: list[tuple[RawAssetDoc, str | None]] = []
        watermarks: dict[tuple[str, AssetKind], datetime] = {}
        for provider in self.providers:
            for kind in provider.kinds:
                effective_since = since
                if effective_since is None:
                    effective_since = self.db.get_watermark(provider.provider_id, kind) or EPOCH
                try:
                    refs = self._list_all(provider, kind, effective_since)
                except ProviderUnavailable as exc:
                    run.errors.append({"provider": provider.provider_id, "reason": str(exc)})
                    continue
                for ref in refs:
                    run.assets_seen += 1
                    key = (provider.provider_id, kind)
                    if key not in watermarks or ref.created_at > watermarks[key]:
                        watermarks[key] = ref.created_at
                    try:
                        self._permit(provider.provider_id)
                        doc = provider.fetch_card(ref)
                        abstract = None
                        if doc.metadata.get("paper_url"):
                            self._permit(provider.provider_id)
                            abstract = provider.fetch_linked_abstract(ref)
                        docs.append((doc, abstract))
                    except ProviderUnavailable as exc:
                        skipped.append(
                            (f"{provider.provider_id}/{ref.ref}", SKIP_PROVIDER_ERROR)
                        )
                        logger.warning("skipping %s: %s", ref.ref, exc)
        return docs, watermarks

    def _list_all(
        self, provider: ProviderClient, kind: AssetKind, since: datetime
    ) -> list[AssetRef]:
        refs: list[AssetRef] = []
        cursor: str | None = None
        while True:
            self._permit(provider.provider_id)
            page, cursor = provider.list_assets_since(since, kind, cursor)
            refs.extend(page)
            if cursor is None:
                return refs

    def _classify_candidates(
        self,
        docs: list[tuple[RawAssetDoc, str | None]],
        skipped: list[tuple[str, str]],
    ) -> list[Candidate]:
        candidates: list[Candidate] = []
        for doc, abstract in docs:
            try:
                record, eval_source = build_asset(doc, abstract)
            except (AssetCatError, KeyError, ValueError) as exc:
                skipped.append((doc.asset_id, SKIP_INVALID_METADATA))
                logger.warning("invalid metadata for %s: %s", doc.asset_id, exc)
                continue
            try:
                matches = classify_with_matches(record, self.taxonomy)
            except MissingDocumentation:
                skipped.append((record.asset_id, SKIP_MISSING_DOCUMENTATION))
                continue
            if not matches:
                skipped.append((record.asset_id, SKIP_NOT_SE_RELEVANT))
                continue
            candidates.append(Candidate(record=record, matches=matches, eval_source=eval_source))
        return candidates

    def _resolve_ambiguities(
        self,
        candidates: list[Candidate],
        existing: list[AssetRecord],
        skipped: list[tuple[str, str]],
    ) -> list[Candidate]:
        """Apply outlier detection to ambiguous-only matches; returns the
        candidates that keep at least one assignment."""
        corpus_assets = existing + [c.record for c in candidates]
        space = VectorSpace().fit([similarity_text(a) for a in corpus_assets])
        vectors = {a.asset_id: space.vectorize(similarity_text(a)) for a in corpus_assets}

        # Centroid cohorts: unambiguously matched assets per task, drawn from
        # the already-catalogued assets (reclassified from their stored cards)
        # plus this batch.
        cohorts: dict[str, list] = {}
        for asset in existing:
            try:
                for match in classify_with_matches(asset, self.taxonomy):
                    if not match.ambiguous_only:
                        cohorts.setdefault(match.assignment.task_id, []).append(
                            vectors[asset.asset_id]
                        )
            except MissingDocumentation:
                continue
        for candidate in candidates:
            for match in candidate.matches:
                if not match.ambiguous_only:
                    cohorts.setdefault(match.assignment.task_id, []).append(
                        vectors[candidate.record.asset_id]
                    )

        ambiguous_pairs = []
        firm_by_asset: dict[str, list] = {}
        for candidate in candidates:
            for match in candidate.matches:
                if match.ambiguous_only:
                    ambiguous_pairs.append((candidate.record, match.assignment))
                else:
                    firm_by_asset.setdefault(candidate.record.asset_id, []).append(
                        match.assignment
                    )

        partition = detect_lexical_outliers(
            ambiguous_pairs, vectors, cohorts, self.settings.outlier_floor
        )
        kept_by_asset: dict[str, list] = {}
        for asset, assignment in partition.kept:
            kept_by_asset.setdefault(asset.asset_id, []).append(assignment)

        catalogued = []
        for candidate in candidates:
            asset_id = candidate.record.asset_id
            assignments = firm_by_asset.get(asset_id, []) + kept_by_asset.get(asset_id, [])
            if not assignments:
                skipped.append((asset_id, SKIP_LEXICAL_OUTLIER))
                continue
            assignments.sort(key=lambda a: (-a.confidence, a.task_id))
            candidate.record.se_tasks = assignments
            catalogued.append(candidate)
        return catalogued

    # -- metrics refresh ------------------------------------------------------

    def _provider_for(self, asset: AssetRecord) -> ProviderClient | None:
        for provider in self.providers:
            if provider.provider_id == asset.provider:
                return provider
        return None

    def _ref_for(self, asset: AssetRecord) -> AssetRef:
        slug = asset.asset_id.removeprefix(f"{asset.provider}/")
        return AssetRef(
            provider_id=asset.provider, kind=asset.kind, ref=slug, created_at=asset.created_at
        )

    def run_metrics_refresh(self, asset_ids: list[str] | None = None) -> JobRun:
        started = self.clock.now()
        run = JobRun(
            job_id=new_id(), job_type=REFRESH_JOB, started_at=started, finished_at=started
        )
        assets = self.db.snapshot()
        if asset_ids is not None:
            wanted = set(asset_ids)
            assets = [a for a in assets if a.asset_id in wanted]
        with self.db.batch() as batch:
            for asset in assets:
                run.assets_seen += 1
                provider = self._provider_for(asset)
                if provider is None:
                    run.assets_skipped += 1
                    run.errors.append({"asset": asset.asset_id, "reason": "unknown-provider"})
                    continue
                try:
                    self._permit(provider.provider_id)
                    metrics = provider.fetch_metrics(self._ref_for(asset))
                    batch.update_metrics(
                        asset.asset_id,
                        downloads=metrics.downloads,
                        likes=metrics.likes,
                        commits=metrics.commits,
                        contributors=metrics.contributors,
                        refreshed_at=metrics.as_of or self.clock.now(),
                    )
                except (ProviderUnavailable, AssetCatError) as exc:
                    run.assets_skipped += 1
                    run.errors.append({"asset": asset.asset_id, "reason": str(exc)})
                    batch.mark_refresh_failure(asset.asset_id, self.settings.stale_after_failures)
            run.finished_at = self.clock.now()
            batch.record_job_run(run)
        return run

    def refresh_asset(self, asset_id: str) -> None:
        """On-demand single-asset refresh; fails fast with RateBudgetExhausted
        instead of waiting when the provider budget has no permit."""
        asset = self.db.get_asset(asset_id)
        if asset is None:
            raise ProviderUnavailable(f"asset {asset_id!r} is not catalogued")
        provider = self._provider_for(asset)
        if provider is None:
            raise ProviderUnavailable(f"no provider registered for {asset.provider!r}")
        bucket = self.limiters.get(provider.provider_id)
        if bucket is not None:
            wait = bucket.try_acquire()
            if wait > 0:
                raise RateBudgetExhausted(
                    f"provider {provider.provider_id!r} budget exhausted", retry_after=wait
                )
        metrics = provider.fetch_metrics(self._ref_for(asset))
        with self.db.batch() as batch:
            batch.update_metrics(
                asset_id,
                downloads=metrics.downloads,
                likes=metrics.likes,
                commits=metrics.commits,
                contributors=metrics.contributors,
                refreshed_at=metrics.as_of or self.clock.now(),
            )
