"""Catalogue querying and export: FilterQuery evaluation, sorting,
pagination, and CSV/JSON/XML serialization."""

from .exports import CSV_COLUMNS, ExportFormat, MEDIA_TYPES, eval_summaries, export, flat_record
from .filters import (
    DateRange,
    DatasetFilters,
    FilterQuery,
    IntRange,
    MAX_PAGE_LIMIT,
    ModelFilters,
    Page,
    ResultPage,
    SortDirection,
    SortKey,
    SortSpec,
    apply_filters,
    match_set,
    matches,
    sort_assets,
)

__all__ = [
    "CSV_COLUMNS",
    "DateRange",
    "DatasetFilters",
    "ExportFormat",
    "FilterQuery",
    "IntRange",
    "MAX_PAGE_LIMIT",
    "MEDIA_TYPES",
    "ModelFilters",
    "Page",
    "ResultPage",
    "SortDirection",
    "SortKey",
    "SortSpec",
    "apply_filters",
    "eval_summaries",
    "export",
    "flat_record",
    "match_set",
    "matches",
    "sort_assets",
]
