"""Domain model and cataloguing pipeline: taxonomy classification,
lexical-outlier rejection, and cosine-similarity deduplication."""

from .classify import (
    OutlierPartition,
    TaskMatch,
    classify_asset,
    classify_with_matches,
    detect_lexical_outliers,
    outlier_threshold,
    similarity_text,
)
from .dedup import DEFAULT_DEDUP_THRESHOLD, DuplicateGroup, apply_duplicate_marks, deduplicate
from .taxonomy import load_seed_taxonomy, load_taxonomy, load_taxonomy_file
from .types import (
    ActivityMetrics,
    AssetKind,
    AssetRecord,
    DatasetExtension,
    ModelExtension,
    PopularityMetrics,
    SDLCStage,
    SETaskAssignment,
    SizeRowsBucket,
    TaxonomyEntry,
    bucket_for_rows,
)
from .vectors import DocumentVector, VectorSpace, centroid, cosine_similarity, tokenize

__all__ = [
    "ActivityMetrics",
    "AssetKind",
    "AssetRecord",
    "DatasetExtension",
    "DEFAULT_DEDUP_THRESHOLD",
    "DocumentVector",
    "DuplicateGroup",
    "ModelExtension",
    "OutlierPartition",
    "PopularityMetrics",
    "SDLCStage",
    "SETaskAssignment",
    "SizeRowsBucket",
    "TaskMatch",
    "TaxonomyEntry",
    "VectorSpace",
    "apply_duplicate_marks",
    "bucket_for_rows",
    "centroid",
    "classify_asset",
    "classify_with_matches",
    "cosine_similarity",
    "deduplicate",
    "detect_lexical_outliers",
    "load_seed_taxonomy",
    "load_taxonomy",
    "load_taxonomy_file",
    "outlier_threshold",
    "similarity_text",
    "tokenize",
]
