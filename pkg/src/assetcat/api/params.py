"""Query-parameter encoding of catalogue and leaderboard queries.

Sets travel as repeated parameters, ranges as _from/_to suffixed pairs,
timestamps as RFC 3339. Unknown parameters are rejected with field-level
diagnostics so third-party callers notice typos instead of silently
getting unfiltered results.
"""

from __future__ import annotations

from ..catalog.types import AssetKind, SizeRowsBucket
from ..errors import InvalidQuery
from ..leaderboard.types import LeaderboardQuery
from ..search.filters import (
    DEFAULT_PAGE_LIMIT,
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
from ..timeutil import parse_rfc3339

_SET_PARAMS = {
    "se_task": "se_task_ids",
    "license": "licenses",
    "library": "libraries",
    "natural_language": "natural_languages",
    "ml_task": "ml_tasks",
}
_MODEL_SET_PARAMS = {
    "region": "regions",
    "training_dataset": "training_datasets",
    "inference_provider": "inference_providers",
}
# "dataset_format" avoids colliding with the export media-type parameter.
_DATASET_SET_PARAMS = {
    "dataset_format": "formats",
    "modality": "modalities",
    "discipline": "disciplines",
}
_RANGE_PARAMS = {
    "downloads": "downloads_range",
    "likes": "likes_range",
    "commits": "commits_range",
    "contributors": "contributors_range",
}

_KNOWN_PARAMS = (
    {"identifier", "created_from", "created_to", "sort_by", "sort_dir", "offset", "limit"}
    | set(_SET_PARAMS)
    | set(_MODEL_SET_PARAMS)
    | set(_DATASET_SET_PARAMS)
    | {f"{p}_from" for p in _RANGE_PARAMS}
    | {f"{p}_to" for p in _RANGE_PARAMS}
    | {"size_bytes_from", "size_bytes_to", "has_eval_results", "size_rows_bucket"}
)

LEADERBOARD_PARAMS = {
    "benchmark",
    "implementation",
    "language",
    "metric",
    "metric_config",
    "name_search",
}


def _parse_int(params, name: str) -> int | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise InvalidQuery(f"{name} must be an integer", {name: "not an integer"}) from None


def _parse_date(params, name: str):
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    try:
        return parse_rfc3339(raw)
    except ValueError:
        raise InvalidQuery(
            f"{name} must be an RFC 3339 timestamp", {name: "not a timestamp"}
        ) from None


def _int_range(params, prefix: str) -> IntRange | None:
    lower = _parse_int(params, f"{prefix}_from")
    upper = _parse_int(params, f"{prefix}_to")
    if lower is None and upper is None:
        return None
    return IntRange(lower=lower, upper=upper)


def _bool(params, name: str) -> bool | None:
    raw = params.get(name)
    if raw is None or raw == "":
        return None
    lowered = raw.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise InvalidQuery(f"{name} must be a boolean", {name: "not a boolean"})


def parse_filter_params(params, kind: AssetKind, extra_allowed: set[str] = frozenset()) -> FilterQuery:
    """Build a validated FilterQuery from a request's query multi-dict."""
    unknown = set(params.keys()) - _KNOWN_PARAMS - extra_allowed
    if unknown:
        raise InvalidQuery(
            "unknown query parameters", {k: "unknown parameter" for k in sorted(unknown)}
        )

    def multi(name: str) -> set[str] | None:
        values = params.getlist(name) if hasattr(params, "getlist") else params.get(name, [])
        values = [v for v in values if v]
        return set(values) or None

    created_from = _parse_date(params, "created_from")
    created_to = _parse_date(params, "created_to")
    created = (
        DateRange(lower=created_from, upper=created_to)
        if created_from is not None or created_to is not None
        else None
    )

    buckets = None
    raw_buckets = multi("size_rows_bucket")
    if raw_buckets is not None:
        try:
            buckets = {SizeRowsBucket(b) for b in raw_buckets}
        except ValueError:
            raise InvalidQuery(
                "unknown size bucket", {"size_rows_bucket": "invalid bucket"}
            ) from None

    try:
        sort_key = SortKey(params.get("sort_by") or "created_at")
        sort_dir = SortDirection(params.get("sort_dir") or "descending")
    except ValueError:
        raise InvalidQuery(
            "invalid sort parameters", {"sort_by": "unknown key or direction"}
        ) from None

    query = FilterQuery(
        kind=kind,
        identifier_substring=params.get("identifier") or None,
        se_task_ids=multi("se_task"),
        licenses=multi("license"),
        libraries=multi("library"),
        natural_languages=multi("natural_language"),
        ml_tasks=multi("ml_task"),
        created_between=created,
        downloads_range=_int_range(params, "downloads"),
        likes_range=_int_range(params, "likes"),
        commits_range=_int_range(params, "commits"),
        contributors_range=_int_range(params, "contributors"),
        model_only=ModelFilters(
            size_bytes_range=_int_range(params, "size_bytes"),
            regions=multi("region"),
            training_datasets=multi("training_dataset"),
            inference_providers=multi("inference_provider"),
            has_eval_results=_bool(params, "has_eval_results"),
        ),
        dataset_only=DatasetFilters(
            size_rows_buckets=buckets,
            formats=multi("dataset_format"),
            modalities=multi("modality"),
            disciplines=multi("discipline"),
        ),
        sort=SortSpec(key=sort_key, direction=sort_dir),
        page=Page(
            offset=_parse_int(params, "offset") or 0,
            limit=_parse_int(params, "limit") or DEFAULT_PAGE_LIMIT,
        ),
    )
    query.validate()
    return query


def parse_leaderboard_params(params, extra_allowed: set[str] = frozenset()) -> LeaderboardQuery:
    unknown = set(params.keys()) - LEADERBOARD_PARAMS - extra_allowed
    if unknown:
        raise InvalidQuery(
            "unknown query parameters", {k: "unknown parameter" for k in sorted(unknown)}
        )
    return LeaderboardQuery(
        benchmark=params.get("benchmark") or None,
        metric_name=params.get("metric") or None,
        implementation=params.get("implementation") or None,
        language=params.get("language") or None,
        metric_config=params.get("metric_config") or None,
        name_search=params.get("name_search") or None,
    )
