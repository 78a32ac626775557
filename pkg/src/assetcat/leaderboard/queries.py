"""Leaderboard ranking, trend series, and filter-dropdown values.

All queries read a catalogue snapshot; only non-duplicate models that
report evaluation results take part. Dimension matching is exact and
case-insensitive.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from .metrics import MetricRegistry
from .types import (
    EvalRecord,
    FilterDimension,
    LeaderboardQuery,
    MetricDirection,
    RankedEntry,
    Ranking,
    TrendAxis,
    TrendPoint,
)

if TYPE_CHECKING:
    from ..catalog.types import AssetRecord


def _dim_matches(value: str | None, wanted: str | None) -> bool:
    if wanted is None:
        return True
    if value is None:
        return False
    return value.lower() == wanted.lower()


def _eval_pairs(snapshot: list[AssetRecord]) -> list[tuple[AssetRecord, EvalRecord]]:
    pairs = []
    for asset in snapshot:
        if asset.duplicate_of is not None or asset.model is None:
            continue
        for record in asset.model.eval_records:
            pairs.append((asset, record))
    return pairs


def record_matches(record: EvalRecord, query: LeaderboardQuery, skip: FilterDimension | None = None) -> bool:
    checks = [
        (FilterDimension.BENCHMARK, record.benchmark, query.benchmark),
        (FilterDimension.IMPLEMENTATION, record.implementation, query.implementation),
        (FilterDimension.LANGUAGE, record.language, query.language),
        (FilterDimension.METRIC, record.metric_name, query.metric_name),
        (FilterDimension.METRIC_CONFIG, record.metric_config, query.metric_config),
    ]
    return all(
        _dim_matches(value, wanted) for dim, value, wanted in checks if dim is not skip
    )


def rank(
    query: LeaderboardQuery, snapshot: list[AssetRecord], registry: MetricRegistry
) -> Ranking:
    """Rank matching evaluations per the metric's direction.

    Ordering: score (per direction), likes descending, name ascending,
    asset_id ascending. A name_search only hides rows afterwards; surviving
    rows keep their original rank numbers. A benchmark or metric absent
    from the catalogue yields an empty result with an explicit reason.
    """
    query.validate()
    pairs = _eval_pairs(snapshot)

    benchmark = query.benchmark or ""
    metric = query.metric_name or ""
    known_benchmarks = {r.benchmark.lower() for _, r in pairs}
    if benchmark.lower() not in known_benchmarks:
        return Ranking(entries=[], empty_reason=f"unknown benchmark {benchmark!r}")
    known_metrics = {r.metric_name.lower() for _, r in pairs}
    if metric.lower() not in known_metrics:
        return Ranking(entries=[], empty_reason=f"unknown metric {metric!r}")

    matching = [(a, r) for a, r in pairs if record_matches(r, query)]
    descriptor = registry.lookup(metric)
    direction = descriptor.direction if descriptor else MetricDirection.HIGHER_IS_BETTER

    def sort_key(pair: tuple[AssetRecord, EvalRecord]):
        asset, record = pair
        score = -record.score if direction is MetricDirection.HIGHER_IS_BETTER else record.score
        return (score, -asset.popularity.likes, asset.name.casefold(), asset.name, asset.asset_id)

    matching.sort(key=sort_key)
    entries = [
        RankedEntry(
            rank=position,
            asset_id=asset.asset_id,
            name=asset.name,
            score=record.score,
            created_at=asset.created_at,
            parameter_count=asset.model.parameter_count if asset.model else None,
        )
        for position, (asset, record) in enumerate(matching, start=1)
    ]

    if query.name_search:
        needle = query.name_search.lower()
        entries = [e for e in entries if needle in e.name.lower()]
    return Ranking(entries=entries)


def trend_series(
    query: LeaderboardQuery, axis: TrendAxis, snapshot: list[AssetRecord]
) -> list[TrendPoint]:
    """One point per matching record; x is created_at or parameter count.

    Records without a parameter count are omitted on the model_size axis.
    """
    query.validate()
    points = []
    for asset, record in _eval_pairs(snapshot):
        if not record_matches(record, query):
            continue
        if axis is TrendAxis.TIME:
            x: object = asset.created_at
        else:
            if asset.model is None or asset.model.parameter_count is None:
                continue
            x = asset.model.parameter_count
        points.append(TrendPoint(x=x, y=record.score, asset_id=asset.asset_id))
    points.sort(key=lambda p: (p.x, p.asset_id))
    return points


def list_filter_values(
    dimension: FilterDimension,
    partial_query: LeaderboardQuery,
    snapshot: list[AssetRecord],
) -> list[str]:
    """Distinct values for one dropdown, narrowed by the other chosen
    dimensions; lexicographically sorted."""
    getter = {
        FilterDimension.BENCHMARK: lambda r: r.benchmark,
        FilterDimension.IMPLEMENTATION: lambda r: r.implementation,
        FilterDimension.LANGUAGE: lambda r: r.language,
        FilterDimension.METRIC: lambda r: r.metric_name,
        FilterDimension.METRIC_CONFIG: lambda r: r.metric_config,
    }[dimension]
    values = {
        getter(record)
        for _, record in _eval_pairs(snapshot)
        if record_matches(record, partial_query, skip=dimension) and getter(record) is not None
    }
    return sorted(values)
