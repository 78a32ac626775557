"""Multi-criteria catalogue queries: predicates, sorting, pagination.

Matching is a conjunction of all provided predicates. Set predicates use
non-empty intersection, ranges are inclusive, and an asset missing an
attribute targeted by a predicate fails it — requirements are never
satisfied by absence of evidence. Duplicate-flagged assets never appear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from ..catalog.types import AssetKind, AssetRecord, SizeRowsBucket
from ..errors import InvalidQuery

MAX_PAGE_LIMIT = 500
DEFAULT_PAGE_LIMIT = 50


@dataclass(frozen=True)
class IntRange:
    """Inclusive integer range; open ends are None."""

    lower: int | None = None
    upper: int | None = None

    def is_empty(self) -> bool:
        return self.lower is None and self.upper is None

    def inverted(self) -> bool:
        return self.lower is not None and self.upper is not None and self.lower > self.upper

    def contains(self, value: int) -> bool:
        if self.lower is not None and value < self.lower:
            return False
        if self.upper is not None and value > self.upper:
            return False
        return True


@dataclass(frozen=True)
class DateRange:
    """Inclusive UTC datetime range; open ends are None."""

    lower: datetime | None = None
    upper: datetime | None = None

    def is_empty(self) -> bool:
        return self.lower is None and self.upper is None

    def inverted(self) -> bool:
        return self.lower is not None and self.upper is not None and self.lower > self.upper

    def contains(self, value: datetime) -> bool:
        if self.lower is not None and value < self.lower:
            return False
        if self.upper is not None and value > self.upper:
            return False
        return True


class SortKey(str, Enum):
    NAME = "name"
    CREATED_AT = "created_at"
    DOWNLOADS = "downloads"
    LIKES = "likes"
    COMMITS = "commits"
    CONTRIBUTORS = "contributors"


class SortDirection(str, Enum):
    ASCENDING = "ascending"
    DESCENDING = "descending"


@dataclass(frozen=True)
class SortSpec:
    key: SortKey = SortKey.CREATED_AT
    direction: SortDirection = SortDirection.DESCENDING


@dataclass(frozen=True)
class Page:
    offset: int = 0
    limit: int = DEFAULT_PAGE_LIMIT


@dataclass
class ModelFilters:
    size_bytes_range: IntRange | None = None
    regions: set[str] | None = None
    training_datasets: set[str] | None = None
    inference_providers: set[str] | None = None
    has_eval_results: bool | None = None

    def any_set(self) -> bool:
        return any(
            v is not None
            for v in (
                self.size_bytes_range,
                self.regions,
                self.training_datasets,
                self.inference_providers,
                self.has_eval_results,
            )
        )


@dataclass
class DatasetFilters:
    size_rows_buckets: set[SizeRowsBucket] | None = None
    formats: set[str] | None = None
    modalities: set[str] | None = None
    disciplines: set[str] | None = None

    def any_set(self) -> bool:
        return any(
            v is not None
            for v in (self.size_rows_buckets, self.formats, self.modalities, self.disciplines)
        )


@dataclass
class FilterQuery:
    """Declarative predicate + sort + pagination over one asset kind.

    An otherwise-empty query matches every non-duplicate asset of the kind.
    """

    kind: AssetKind
    identifier_substring: str | None = None
    se_task_ids: set[str] | None = None
    licenses: set[str] | None = None
    libraries: set[str] | None = None
    natural_languages: set[str] | None = None
    ml_tasks: set[str] | None = None
    created_between: DateRange | None = None
    downloads_range: IntRange | None = None
    likes_range: IntRange | None = None
    commits_range: IntRange | None = None
    contributors_range: IntRange | None = None
    model_only: ModelFilters = field(default_factory=ModelFilters)
    dataset_only: DatasetFilters = field(default_factory=DatasetFilters)
    sort: SortSpec = field(default_factory=SortSpec)
    page: Page = field(default_factory=Page)

    def validate(self) -> None:
        errors: dict[str, str] = {}
        if self.kind is AssetKind.MODEL and self.dataset_only.any_set():
            errors["dataset_only"] = "dataset filters are not allowed for kind=model"
        if self.kind is AssetKind.DATASET and self.model_only.any_set():
            errors["model_only"] = "model filters are not allowed for kind=dataset"
        ranges: list[tuple[str, IntRange | DateRange | None]] = [
            ("created_between", self.created_between),
            ("downloads_range", self.downloads_range),
            ("likes_range", self.likes_range),
            ("commits_range", self.commits_range),
            ("contributors_range", self.contributors_range),
            ("size_bytes_range", self.model_only.size_bytes_range),
        ]
        for name, rng in ranges:
            if rng is not None and rng.inverted():
                errors[name] = "range lower bound exceeds upper bound"
        if self.page.offset < 0:
            errors["offset"] = "offset must be >= 0"
        if not 1 <= self.page.limit <= MAX_PAGE_LIMIT:
            errors["limit"] = f"limit must lie in [1, {MAX_PAGE_LIMIT}]"
        if errors:
            raise InvalidQuery("invalid filter query", errors)


@dataclass
class ResultPage:
    total_matching: int
    items: list[AssetRecord]
    applied_query: FilterQuery


def _intersects(have: set[str], wanted: set[str] | None) -> bool:
    return wanted is None or bool(have & wanted)


def matches(query: FilterQuery, asset: AssetRecord) -> bool:
    """Conjunction of all provided predicates for one asset."""
    if asset.kind is not query.kind:
        return False
    if query.identifier_substring is not None:
        needle = query.identifier_substring.lower()
        if needle not in asset.name.lower() and needle not in asset.asset_id.lower():
            return False
    if query.se_task_ids is not None:
        if not ({a.task_id for a in asset.se_tasks} & query.se_task_ids):
            return False
    if not _intersects(asset.licenses, query.licenses):
        return False
    if not _intersects(asset.libraries, query.libraries):
        return False
    if not _intersects(asset.natural_languages, query.natural_languages):
        return False
    if not _intersects(asset.ml_tasks, query.ml_tasks):
        return False
    if query.created_between is not None and not query.created_between.contains(asset.created_at):
        return False
    if query.downloads_range is not None and not query.downloads_range.contains(
        asset.popularity.downloads
    ):
        return False
    if query.likes_range is not None and not query.likes_range.contains(asset.popularity.likes):
        return False
    if query.commits_range is not None and not query.commits_range.contains(
        asset.activity.commits
    ):
        return False
    if query.contributors_range is not None and not query.contributors_range.contains(
        asset.activity.contributors
    ):
        return False

    if query.kind is AssetKind.MODEL:
        ext = asset.model
        if ext is None:
            return False
        mf = query.model_only
        if mf.size_bytes_range is not None and not mf.size_bytes_range.contains(ext.size_bytes):
            return False
        if mf.regions is not None and (ext.region is None or ext.region not in mf.regions):
            return False
        if not _intersects(ext.training_datasets, mf.training_datasets):
            return False
        if not _intersects(ext.inference_providers, mf.inference_providers):
            return False
        if mf.has_eval_results is not None and bool(ext.eval_records) != mf.has_eval_results:
            return False
    else:
        ext = asset.dataset
        if ext is None:
            return False
        df = query.dataset_only
        if df.size_rows_buckets is not None and ext.size_rows_bucket not in df.size_rows_buckets:
            return False
        if not _intersects(ext.formats, df.formats):
            return False
        if not _intersects(ext.modalities, df.modalities):
            return False
        if not _intersects(ext.disciplines, df.disciplines):
            return False
    return True


def _sort_value(asset: AssetRecord, key: SortKey):
    if key is SortKey.NAME:
        return (asset.name.casefold(), asset.name)
    if key is SortKey.CREATED_AT:
        return asset.created_at
    if key is SortKey.DOWNLOADS:
        return asset.popularity.downloads
    if key is SortKey.LIKES:
        return asset.popularity.likes
    if key is SortKey.COMMITS:
        return asset.activity.commits
    return asset.activity.contributors


def sort_assets(assets: list[AssetRecord], spec: SortSpec) -> list[AssetRecord]:
    """Sort per SortSpec; ties always break by asset_id ascending."""
    ordered = sorted(assets, key=lambda a: a.asset_id)
    ordered.sort(
        key=lambda a: _sort_value(a, spec.key),
        reverse=spec.direction is SortDirection.DESCENDING,
    )
    return ordered


def match_set(query: FilterQuery, snapshot: list[AssetRecord]) -> list[AssetRecord]:
    """Unpaginated, unsorted match set (duplicates excluded)."""
    return [a for a in snapshot if a.duplicate_of is None and matches(query, a)]


def apply_filters(query: FilterQuery, snapshot: list[AssetRecord]) -> ResultPage:
    """Evaluate, sort, and paginate one FilterQuery over a snapshot."""
    query.validate()
    matched = sort_assets(match_set(query, snapshot), query.sort)
    window = matched[query.page.offset : query.page.offset + query.page.limit]
    return ResultPage(total_matching=len(matched), items=window, applied_query=query)
