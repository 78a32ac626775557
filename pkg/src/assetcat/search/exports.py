"""Serialization of query result sets to CSV, JSON, and XML.

Exports cover the full unpaginated match set with all asset attributes;
card texts are represented by a has_card flag only. Leaderboard results
are flattened to the best score per (benchmark, metric). Output is
deterministic: the same snapshot, query, and format produce byte-identical
streams. Field order is frozen in docs/export-format.md.
"""

from __future__ import annotations

import csv
import io
import json
from enum import Enum
from xml.etree import ElementTree

from ..catalog.types import AssetRecord
from ..errors import UnsupportedFormat
from ..leaderboard.metrics import MetricRegistry
from ..leaderboard.types import MetricDirection
from ..timeutil import to_rfc3339
from .filters import FilterQuery, match_set, sort_assets


class ExportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    XML = "xml"


MEDIA_TYPES = {
    ExportFormat.CSV: "text/csv; charset=utf-8",
    ExportFormat.JSON: "application/json",
    ExportFormat.XML: "application/xml",
}

# Frozen header order; see docs/export-format.md.
CSV_COLUMNS = [
    "asset_id",
    "kind",
    "name",
    "provider",
    "repo_url",
    "created_at",
    "last_refreshed_at",
    "licenses",
    "libraries",
    "natural_languages",
    "ml_tasks",
    "se_tasks",
    "downloads",
    "likes",
    "commits",
    "contributors",
    "duplicate_of",
    "stale",
    "has_card",
    "has_abstract",
    "size_bytes",
    "region",
    "training_datasets",
    "inference_providers",
    "parameter_count",
    "size_rows_bucket",
    "formats",
    "modalities",
    "disciplines",
    "eval_summaries",
]

_MULTI_VALUE_SEPARATOR = "; "

# Singular element names for repeated XML children.
_XML_ITEM_NAMES = {
    "licenses": "license",
    "libraries": "library",
    "natural_languages": "natural_language",
    "ml_tasks": "ml_task",
    "training_datasets": "training_dataset",
    "inference_providers": "inference_provider",
    "formats": "format",
    "modalities": "modality",
    "disciplines": "discipline",
}


def eval_summaries(asset: AssetRecord, registry: MetricRegistry) -> list[dict]:
    """Best reported score per (benchmark, metric), per metric direction."""
    best: dict[tuple[str, str], float] = {}
    for record in asset.eval_records:
        key = (record.benchmark, record.metric_name)
        descriptor = registry.lookup(record.metric_name)
        lower_wins = descriptor is not None and descriptor.direction is MetricDirection.LOWER_IS_BETTER
        current = best.get(key)
        if current is None:
            best[key] = record.score
        elif lower_wins:
            best[key] = min(current, record.score)
        else:
            best[key] = max(current, record.score)
    return [
        {"benchmark": benchmark, "metric_name": metric, "best_score": score}
        for (benchmark, metric), score in sorted(best.items())
    ]


def flat_record(asset: AssetRecord, registry: MetricRegistry) -> dict:
    """One export record with every field present (None where not applicable)."""
    model = asset.model
    dataset = asset.dataset
    return {
        "asset_id": asset.asset_id,
        "kind": asset.kind.value,
        "name": asset.name,
        "provider": asset.provider,
        "repo_url": asset.repo_url,
        "created_at": to_rfc3339(asset.created_at),
        "last_refreshed_at": to_rfc3339(asset.last_refreshed_at),
        "licenses": sorted(asset.licenses),
        "libraries": sorted(asset.libraries),
        "natural_languages": sorted(asset.natural_languages),
        "ml_tasks": sorted(asset.ml_tasks),
        "se_tasks": [
            {
                "task_id": a.task_id,
                "confidence": a.confidence,
                "rationale": a.rationale,
                "low_confidence": a.low_confidence,
            }
            for a in asset.se_tasks
        ],
        "downloads": asset.popularity.downloads,
        "likes": asset.popularity.likes,
        "commits": asset.activity.commits,
        "contributors": asset.activity.contributors,
        "duplicate_of": asset.duplicate_of,
        "stale": asset.stale,
        "has_card": bool(asset.card_text.strip()),
        "has_abstract": asset.abstract_text is not None,
        "size_bytes": model.size_bytes if model else None,
        "region": model.region if model else None,
        "training_datasets": sorted(model.training_datasets) if model else [],
        "inference_providers": sorted(model.inference_providers) if model else [],
        "parameter_count": model.parameter_count if model else None,
        "size_rows_bucket": dataset.size_rows_bucket.value if dataset else None,
        "formats": sorted(dataset.formats) if dataset else [],
        "modalities": sorted(dataset.modalities) if dataset else [],
        "disciplines": sorted(dataset.disciplines) if dataset else [],
        "eval_summaries": eval_summaries(asset, registry),
    }


def _csv_cell(column: str, value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if column == "se_tasks":
        return _MULTI_VALUE_SEPARATOR.join(
            f"{t['task_id']}:{t['confidence']:.4f}" for t in value
        )
    if column == "eval_summaries":
        return _MULTI_VALUE_SEPARATOR.join(
            f"{s['benchmark']}/{s['metric_name']}={s['best_score']!r}" for s in value
        )
    if isinstance(value, list):
        return _MULTI_VALUE_SEPARATOR.join(value)
    return str(value)


def _to_csv(records: list[dict]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=",", quotechar='"', lineterminator="\r\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow([_csv_cell(column, record[column]) for column in CSV_COLUMNS])
    return buffer.getvalue().encode("utf-8")


def _to_json(records: list[dict]) -> bytes:
    ordered = [{column: record[column] for column in CSV_COLUMNS} for record in records]
    return (json.dumps(ordered, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _xml_scalar(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _to_xml(records: list[dict]) -> bytes:
    root = ElementTree.Element("assets")
    for record in records:
        asset_el = ElementTree.SubElement(root, "asset")
        for column in CSV_COLUMNS:
            value = record[column]
            if column == "se_tasks":
                container = ElementTree.SubElement(asset_el, "se_tasks")
                for task in value:
                    task_el = ElementTree.SubElement(container, "se_task")
                    for key in ("task_id", "confidence", "rationale", "low_confidence"):
                        ElementTree.SubElement(task_el, key).text = _xml_scalar(task[key])
            elif column == "eval_summaries":
                container = ElementTree.SubElement(asset_el, "eval_summaries")
                for summary in value:
                    summary_el = ElementTree.SubElement(container, "eval_summary")
                    for key in ("benchmark", "metric_name", "best_score"):
                        ElementTree.SubElement(summary_el, key).text = _xml_scalar(summary[key])
            elif isinstance(value, list):
                container = ElementTree.SubElement(asset_el, column)
                item_name = _XML_ITEM_NAMES[column]
                for item in value:
                    ElementTree.SubElement(container, item_name).text = item
            else:
                ElementTree.SubElement(asset_el, column).text = _xml_scalar(value)
    ElementTree.indent(root, space="  ")
    return ElementTree.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"


def export(
    query: FilterQuery,
    snapshot: list[AssetRecord],
    fmt: ExportFormat | str,
    registry: MetricRegistry,
) -> tuple[bytes, str]:
    """Serialize the full (unpaginated) match set; returns (bytes, media type)."""
    try:
        fmt = ExportFormat(fmt)
    except ValueError:
        raise UnsupportedFormat(f"unsupported export format {fmt!r}") from None
    query.validate()
    matched = sort_assets(match_set(query, snapshot), query.sort)
    records = [flat_record(asset, registry) for asset in matched]
    if fmt is ExportFormat.CSV:
        payload = _to_csv(records)
    elif fmt is ExportFormat.JSON:
        payload = _to_json(records)
    else:
        payload = _to_xml(records)
    return payload, MEDIA_TYPES[fmt]
