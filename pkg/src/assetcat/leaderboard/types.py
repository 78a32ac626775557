"""Leaderboard domain types: normalized evaluations, queries, and results."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from ..errors import ValidationError


class MetricDirection(str, Enum):
    HIGHER_IS_BETTER = "higher_is_better"
    LOWER_IS_BETTER = "lower_is_better"


@dataclass
class EvalRecord:
    """One normalized self-reported evaluation from a model card.

    The tuple (asset_id, benchmark, implementation, language, metric_name,
    metric_config) is the uniqueness key; re-ingestion overwrites.
    """

    asset_id: str
    benchmark: str
    metric_name: str
    score: float
    reported_at: datetime
    implementation: str | None = None
    language: str | None = None
    metric_config: str | None = None
    # Provenance flags: '%' scores were divided by 100; unrecognized metric
    # labels passed through the registry verbatim.
    percent_normalized: bool = False
    unrecognized_metric: bool = False

    def key(self) -> tuple[str, str, str, str, str, str]:
        return (
            self.asset_id,
            self.benchmark,
            self.implementation or "",
            self.language or "",
            self.metric_name,
            self.metric_config or "",
        )

    def validate(self) -> None:
        if not self.benchmark:
            raise ValidationError("benchmark must be non-empty")
        if not self.metric_name:
            raise ValidationError("metric_name must be non-empty")
        if self.score != self.score or self.score in (float("inf"), float("-inf")):
            raise ValidationError("score must be finite")


@dataclass
class LeaderboardQuery:
    """The five leaderboard filter dimensions plus a display-only name search.

    benchmark and metric_name are required for ranking/trends; partially
    built queries (dropdown narrowing) may leave them unset.
    """

    benchmark: str | None = None
    metric_name: str | None = None
    implementation: str | None = None
    language: str | None = None
    metric_config: str | None = None
    name_search: str | None = None

    def validate(self) -> None:
        if not self.benchmark:
            raise ValidationError("benchmark is required", {"benchmark": "required"})
        if not self.metric_name:
            raise ValidationError("metric is required", {"metric": "required"})


@dataclass
class RankedEntry:
    rank: int
    asset_id: str
    name: str
    score: float
    created_at: datetime
    parameter_count: int | None = None


@dataclass
class Ranking:
    """Ranked rows plus the reason the result is empty, when it is."""

    entries: list[RankedEntry] = field(default_factory=list)
    empty_reason: str | None = None


@dataclass
class TrendPoint:
    x: object  # datetime (time axis) or int parameter count (model_size axis)
    y: float
    asset_id: str


class TrendAxis(str, Enum):
    TIME = "time"
    MODEL_SIZE = "model_size"


class FilterDimension(str, Enum):
    BENCHMARK = "benchmark"
    IMPLEMENTATION = "implementation"
    LANGUAGE = "language"
    METRIC = "metric"
    METRIC_CONFIG = "metric_config"
