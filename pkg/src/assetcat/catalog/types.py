"""Catalogue domain model: assets, extensions, taxonomy, and task assignments."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from ..errors import ValidationError
from ..leaderboard.types import EvalRecord


class AssetKind(str, Enum):
    MODEL = "model"
    DATASET = "dataset"


class SDLCStage(str, Enum):
    REQUIREMENTS = "requirements"
    DESIGN = "design"
    IMPLEMENTATION = "implementation"
    QUALITY_ASSURANCE = "quality_assurance"
    MAINTENANCE = "maintenance"


class SizeRowsBucket(str, Enum):
    """Powers-of-ten row-count buckets for datasets."""

    LT_1K = "<1K"
    B1K_10K = "1K-10K"
    B10K_100K = "10K-100K"
    B100K_1M = "100K-1M"
    B1M_10M = "1M-10M"
    B10M_100M = "10M-100M"
    B100M_1B = "100M-1B"
    GT_1B = ">1B"


BUCKET_ORDER: list[SizeRowsBucket] = list(SizeRowsBucket)

_BUCKET_UPPER_BOUNDS = [
    (1_000, SizeRowsBucket.LT_1K),
    (10_000, SizeRowsBucket.B1K_10K),
    (100_000, SizeRowsBucket.B10K_100K),
    (1_000_000, SizeRowsBucket.B100K_1M),
    (10_000_000, SizeRowsBucket.B1M_10M),
    (100_000_000, SizeRowsBucket.B10M_100M),
    (1_000_000_000, SizeRowsBucket.B100M_1B),
]


def bucket_for_rows(rows: int) -> SizeRowsBucket:
    for upper, bucket in _BUCKET_UPPER_BOUNDS:
        if rows < upper:
            return bucket
    return SizeRowsBucket.GT_1B


@dataclass(frozen=True)
class PopularityMetrics:
    downloads: int = 0
    likes: int = 0

    def validate(self) -> None:
        if self.downloads < 0 or self.likes < 0:
            raise ValidationError("popularity counts must be non-negative")


@dataclass(frozen=True)
class ActivityMetrics:
    commits: int = 0
    contributors: int = 0

    def validate(self) -> None:
        if self.commits < 0 or self.contributors < 0:
            raise ValidationError("activity counts must be non-negative")
        # A contributor implies at least one commit.
        if self.contributors > self.commits and not (self.commits == 0 and self.contributors == 0):
            raise ValidationError("contributors cannot exceed commits")


@dataclass
class TaxonomyEntry:
    task_id: str
    task_name: str
    sdlc_stage: SDLCStage
    lexicon: list[str]
    ambiguity_terms: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not self.task_id:
            raise ValidationError("task_id must be non-empty")
        if not self.lexicon:
            raise ValidationError(f"task {self.task_id!r} has an empty lexicon")
        lexicon_lower = {t.lower() for t in self.lexicon}
        for term in self.ambiguity_terms:
            if term.lower() not in lexicon_lower:
                raise ValidationError(
                    f"ambiguity term {term!r} of task {self.task_id!r} is not in its lexicon"
                )


@dataclass
class SETaskAssignment:
    task_id: str
    confidence: float
    rationale: str
    # Set when the assignment survived outlier detection only because the
    # task had no non-ambiguous members to compare against.
    low_confidence: bool = False

    def validate(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValidationError("confidence must lie in [0, 1]")


@dataclass
class ModelExtension:
    size_bytes: int = 0
    region: str | None = None
    training_datasets: set[str] = field(default_factory=set)
    inference_providers: set[str] = field(default_factory=set)
    eval_records: list[EvalRecord] = field(default_factory=list)
    parameter_count: int | None = None

    def validate(self) -> None:
        if self.size_bytes < 0:
            raise ValidationError("size_bytes must be non-negative")
        if self.parameter_count is not None and self.parameter_count < 0:
            raise ValidationError("parameter_count must be non-negative")


@dataclass
class DatasetExtension:
    size_rows_bucket: SizeRowsBucket = SizeRowsBucket.LT_1K
    formats: set[str] = field(default_factory=set)
    modalities: set[str] = field(default_factory=set)
    disciplines: set[str] = field(default_factory=set)

    def validate(self) -> None:
        if not isinstance(self.size_rows_bucket, SizeRowsBucket):
            raise ValidationError("size_rows_bucket must be one of the fixed buckets")


@dataclass
class AssetRecord:
    """Provider-agnostic catalogue entry for one model or dataset.

    Exactly one of ``model`` / ``dataset`` is present, matching ``kind``.
    ``duplicate_of`` marks near-duplicates collapsed under a canonical entry;
    flagged rows stay in the store but are excluded from default results.
    """

    asset_id: str
    kind: AssetKind
    name: str
    provider: str
    repo_url: str
    created_at: datetime
    last_refreshed_at: datetime
    licenses: set[str] = field(default_factory=set)
    libraries: set[str] = field(default_factory=set)
    natural_languages: set[str] = field(default_factory=set)
    ml_tasks: set[str] = field(default_factory=set)
    se_tasks: list[SETaskAssignment] = field(default_factory=list)
    popularity: PopularityMetrics = field(default_factory=PopularityMetrics)
    activity: ActivityMetrics = field(default_factory=ActivityMetrics)
    card_text: str = ""
    abstract_text: str | None = None
    model: ModelExtension | None = None
    dataset: DatasetExtension | None = None
    duplicate_of: str | None = None
    stale: bool = False

    def extension_documentation(self) -> str:
        """Searchable documentation: card text, tags, and linked abstract."""
        parts = [self.card_text, ", ".join(sorted(self.ml_tasks))]
        if self.abstract_text:
            parts.append(self.abstract_text)
        return "\n".join(p for p in parts if p)

    def validate(self, taxonomy_ids: set[str] | None = None) -> None:
        if not self.asset_id:
            raise ValidationError("asset_id must be non-empty")
        if self.kind is AssetKind.MODEL and (self.model is None or self.dataset is not None):
            raise ValidationError("a model must carry exactly a ModelExtension")
        if self.kind is AssetKind.DATASET and (self.dataset is None or self.model is not None):
            raise ValidationError("a dataset must carry exactly a DatasetExtension")
        if self.created_at > self.last_refreshed_at:
            raise ValidationError("created_at must not exceed last_refreshed_at")
        self.popularity.validate()
        self.activity.validate()
        if self.model is not None:
            self.model.validate()
        if self.dataset is not None:
            self.dataset.validate()
        for assignment in self.se_tasks:
            assignment.validate()
            if taxonomy_ids is not None and assignment.task_id not in taxonomy_ids:
                raise ValidationError(
                    f"assignment references unknown task {assignment.task_id!r}"
                )

    @property
    def eval_records(self) -> list[EvalRecord]:
        return self.model.eval_records if self.model is not None else []
