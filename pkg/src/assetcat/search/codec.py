"""JSON codec for FilterQuery and LeaderboardQuery.

Used for stored alert preferences and anywhere a query travels as a JSON
document. Unknown keys are rejected so saved criteria cannot silently
drift from the live query schema.
"""

from __future__ import annotations

from typing import Any, Mapping

from ..catalog.types import AssetKind, SizeRowsBucket
from ..errors import InvalidQuery
from ..leaderboard.types import LeaderboardQuery
from ..timeutil import parse_rfc3339, to_rfc3339
from .filters import (
    DateRange,
    DatasetFilters,
    FilterQuery,
    IntRange,
    ModelFilters,
    Page,
    SortDirection,
    SortKey,
    SortSpec,
)

_TOP_KEYS = {
    "kind",
    "identifier_substring",
    "se_task_ids",
    "licenses",
    "libraries",
    "natural_languages",
    "ml_tasks",
    "created_between",
    "downloads_range",
    "likes_range",
    "commits_range",
    "contributors_range",
    "model_only",
    "dataset_only",
    "sort",
    "page",
}
_MODEL_KEYS = {
    "size_bytes_range",
    "regions",
    "training_datasets",
    "inference_providers",
    "has_eval_results",
}
_DATASET_KEYS = {"size_rows_buckets", "formats", "modalities", "disciplines"}
_LEADERBOARD_KEYS = {
    "benchmark",
    "implementation",
    "language",
    "metric_name",
    "metric_config",
    "name_search",
}


def _int_range_to_dict(rng: IntRange | None) -> dict | None:
    if rng is None:
        return None
    return {"from": rng.lower, "to": rng.upper}


def _int_range_from(value: Any, field_name: str) -> IntRange | None:
    if value is None:
        return None
    if not isinstance(value, Mapping):
        raise InvalidQuery(f"{field_name} must be an object", {field_name: "expected object"})
    return IntRange(lower=value.get("from"), upper=value.get("to"))


def _str_set(value: Any, field_name: str) -> set[str] | None:
    if value is None:
        return None
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise InvalidQuery(
            f"{field_name} must be an array of strings", {field_name: "expected string array"}
        )
    return set(value)


def filter_query_to_dict(query: FilterQuery) -> dict:
    """Serialize; omits unset predicates for compact storage."""
    payload: dict[str, Any] = {"kind": query.kind.value}
    if query.identifier_substring is not None:
        payload["identifier_substring"] = query.identifier_substring
    for name in ("se_task_ids", "licenses", "libraries", "natural_languages", "ml_tasks"):
        value = getattr(query, name)
        if value is not None:
            payload[name] = sorted(value)
    if query.created_between is not None:
        payload["created_between"] = {
            "from": to_rfc3339(query.created_between.lower) if query.created_between.lower else None,
            "to": to_rfc3339(query.created_between.upper) if query.created_between.upper else None,
        }
    for name in ("downloads_range", "likes_range", "commits_range", "contributors_range"):
        encoded = _int_range_to_dict(getattr(query, name))
        if encoded is not None:
            payload[name] = encoded
    model: dict[str, Any] = {}
    if query.model_only.size_bytes_range is not None:
        model["size_bytes_range"] = _int_range_to_dict(query.model_only.size_bytes_range)
    for name in ("regions", "training_datasets", "inference_providers"):
        value = getattr(query.model_only, name)
        if value is not None:
            model[name] = sorted(value)
    if query.model_only.has_eval_results is not None:
        model["has_eval_results"] = query.model_only.has_eval_results
    if model:
        payload["model_only"] = model
    dataset: dict[str, Any] = {}
    if query.dataset_only.size_rows_buckets is not None:
        dataset["size_rows_buckets"] = sorted(
            b.value for b in query.dataset_only.size_rows_buckets
        )
    for name in ("formats", "modalities", "disciplines"):
        value = getattr(query.dataset_only, name)
        if value is not None:
            dataset[name] = sorted(value)
    if dataset:
        payload["dataset_only"] = dataset
    payload["sort"] = {"key": query.sort.key.value, "direction": query.sort.direction.value}
    payload["page"] = {"offset": query.page.offset, "limit": query.page.limit}
    return payload


def filter_query_from_dict(payload: Mapping[str, Any]) -> FilterQuery:
    """Deserialize and validate; raises InvalidQuery with field diagnostics."""
    unknown = set(payload) - _TOP_KEYS
    if unknown:
        raise InvalidQuery(
            "unknown filter fields", {k: "unknown field" for k in sorted(unknown)}
        )
    try:
        kind = AssetKind(payload["kind"])
    except (KeyError, ValueError):
        raise InvalidQuery("kind must be 'model' or 'dataset'", {"kind": "invalid"}) from None

    created = None
    raw_created = payload.get("created_between")
    if raw_created is not None:
        created = DateRange(
            lower=parse_rfc3339(raw_created["from"]) if raw_created.get("from") else None,
            upper=parse_rfc3339(raw_created["to"]) if raw_created.get("to") else None,
        )

    raw_model = payload.get("model_only", {})
    unknown = set(raw_model) - _MODEL_KEYS
    if unknown:
        raise InvalidQuery(
            "unknown model filter fields", {k: "unknown field" for k in sorted(unknown)}
        )
    model_only = ModelFilters(
        size_bytes_range=_int_range_from(raw_model.get("size_bytes_range"), "size_bytes_range"),
        regions=_str_set(raw_model.get("regions"), "regions"),
        training_datasets=_str_set(raw_model.get("training_datasets"), "training_datasets"),
        inference_providers=_str_set(
            raw_model.get("inference_providers"), "inference_providers"
        ),
        has_eval_results=raw_model.get("has_eval_results"),
    )

    raw_dataset = payload.get("dataset_only", {})
    unknown = set(raw_dataset) - _DATASET_KEYS
    if unknown:
        raise InvalidQuery(
            "unknown dataset filter fields", {k: "unknown field" for k in sorted(unknown)}
        )
    buckets = None
    if raw_dataset.get("size_rows_buckets") is not None:
        try:
            buckets = {SizeRowsBucket(b) for b in raw_dataset["size_rows_buckets"]}
        except ValueError:
            raise InvalidQuery(
                "unknown size bucket", {"size_rows_buckets": "invalid bucket"}
            ) from None
    dataset_only = DatasetFilters(
        size_rows_buckets=buckets,
        formats=_str_set(raw_dataset.get("formats"), "formats"),
        modalities=_str_set(raw_dataset.get("modalities"), "modalities"),
        disciplines=_str_set(raw_dataset.get("disciplines"), "disciplines"),
    )

    raw_sort = payload.get("sort", {})
    try:
        sort = SortSpec(
            key=SortKey(raw_sort.get("key", "created_at")),
            direction=SortDirection(raw_sort.get("direction", "descending")),
        )
    except ValueError:
        raise InvalidQuery("invalid sort spec", {"sort": "invalid key or direction"}) from None
    raw_page = payload.get("page", {})
    page = Page(offset=int(raw_page.get("offset", 0)), limit=int(raw_page.get("limit", 50)))

    query = FilterQuery(
        kind=kind,
        identifier_substring=payload.get("identifier_substring"),
        se_task_ids=_str_set(payload.get("se_task_ids"), "se_task_ids"),
        licenses=_str_set(payload.get("licenses"), "licenses"),
        libraries=_str_set(payload.get("libraries"), "libraries"),
        natural_languages=_str_set(payload.get("natural_languages"), "natural_languages"),
        ml_tasks=_str_set(payload.get("ml_tasks"), "ml_tasks"),
        created_between=created,
        downloads_range=_int_range_from(payload.get("downloads_range"), "downloads_range"),
        likes_range=_int_range_from(payload.get("likes_range"), "likes_range"),
        commits_range=_int_range_from(payload.get("commits_range"), "commits_range"),
        contributors_range=_int_range_from(
            payload.get("contributors_range"), "contributors_range"
        ),
        model_only=model_only,
        dataset_only=dataset_only,
        sort=sort,
        page=page,
    )
    query.validate()
    return query


def leaderboard_query_to_dict(query: LeaderboardQuery) -> dict:
    payload = {}
    for name in _LEADERBOARD_KEYS:
        value = getattr(query, name)
        if value is not None:
            payload[name] = value
    return payload


def leaderboard_query_from_dict(payload: Mapping[str, Any]) -> LeaderboardQuery:
    unknown = set(payload) - _LEADERBOARD_KEYS
    if unknown:
        raise InvalidQuery(
            "unknown leaderboard fields", {k: "unknown field" for k in sorted(unknown)}
        )
    return LeaderboardQuery(**{k: payload.get(k) for k in _LEADERBOARD_KEYS})
