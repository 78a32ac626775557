"""Leaderboard engine: evaluation extraction, normalization, ranking, trends."""

from .cardparse import parse_dataset_name, parse_eval_metadata, split_front_matter
from .metrics import (
    MetricDescriptor,
    MetricRegistry,
    NormalizedMetric,
    default_registry,
    load_registry,
    load_registry_file,
    normalize_metric,
    split_metric_config,
)
from .queries import list_filter_values, rank, trend_series
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

__all__ = [
    "EvalRecord",
    "FilterDimension",
    "LeaderboardQuery",
    "MetricDescriptor",
    "MetricDirection",
    "MetricRegistry",
    "NormalizedMetric",
    "RankedEntry",
    "Ranking",
    "TrendAxis",
    "TrendPoint",
    "default_registry",
    "list_filter_values",
    "load_registry",
    "load_registry_file",
    "normalize_metric",
    "parse_dataset_name",
    "parse_eval_metadata",
    "rank",
    "split_front_matter",
    "split_metric_config",
    "trend_series",
]
