"""Extraction of self-reported evaluations from model-card metadata.

Cards follow the model-index convention: a list of result objects, each
with a task descriptor, a dataset descriptor carrying a ``name``, and a
metrics list of ``{name or type, value}`` objects. Reported dataset names
encode the evaluation setting as ``Benchmark``, ``Benchmark
(Implementation)``, or ``Benchmark (Implementation, Language)``; anything
else is kept verbatim as the benchmark. Unparseable entries are skipped
and logged, never fabricated.
"""

from __future__ import annotations

import logging
import math
import re
from datetime import datetime
from typing import Any, Mapping

import yaml

from ..errors import MalformedMetadata, ValidationError
from .metrics import MetricRegistry, normalize_metric
from .types import EvalRecord

logger = logging.getLogger(__name__)

_DATASET_NAME_RE = re.compile(r"^(?P<benchmark>[^()]+?)\s*\((?P<inner>[^()]+)\)$")
_FRONT_MATTER_RE = re.compile(r"\A---\s*\n(?P<meta>.*?)\n---\s*\n?", re.DOTALL)


def split_front_matter(card_text: str) -> tuple[dict[str, Any] | None, str]:
    """Split a card into (front-matter mapping, body). No front matter or
    unparseable YAML yields (None, original text)."""
    match = _FRONT_MATTER_RE.match(card_text)
    if not match:
        return None, card_text
    try:
        metadata = yaml.safe_load(match.group("meta"))
    except yaml.YAMLError:
        logger.warning("card front matter is not valid YAML; ignoring it")
        return None, card_text[match.end():]
    if not isinstance(metadata, dict):
        return None, card_text[match.end():]
    return metadata, card_text[match.end():]


def parse_dataset_name(name: str) -> tuple[str, str | None, str | None]:
    """Split a reported dataset name into (benchmark, implementation, language)."""
    name = name.strip()
    match = _DATASET_NAME_RE.match(name)
    if match:
        parts = [p.strip() for p in match.group("inner").split(",")]
        if 1 <= len(parts) <= 2 and all(parts):
            benchmark = match.group("benchmark").strip()
            implementation = parts[0]
            language = parts[1] if len(parts) == 2 else None
            return benchmark, implementation, language
    return name, None, None


def _coerce_score(value: Any) -> tuple[float, bool] | None:
    """Return (score, percent_normalized) or None when not a usable number."""
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        score = float(value)
    elif isinstance(value, str):
        text = value.strip()
        percent = text.endswith("%")
        if percent:
            text = text[:-1].strip()
        try:
            score = float(text)
        except ValueError:
            return None
        if percent:
            return score / 100.0, True
    else:
        return None
    if not math.isfinite(score):
        return None
    return score, False


def _extract_results(card_metadata: Any) -> list[Any]:
    """Pull the model-index result list out of whatever shape we were handed."""
    block = card_metadata
    if isinstance(block, str):
        block = yaml.safe_load(block)
    if isinstance(block, Mapping):
        block = block.get("model-index") or block.get("model_index") or []
    if block is None:
        return []
    if not isinstance(block, list):
        raise MalformedMetadata("model-index block is not a list")
    results: list[Any] = []
    for item in block:
        if isinstance(item, Mapping) and "results" in item:
            inner = item["results"]
            if not isinstance(inner, list):
                raise MalformedMetadata("model-index entry 'results' is not a list")
            results.extend(inner)
        else:
            # Already a bare result object.
            results.append(item)
    return results


def parse_eval_metadata(
    card_metadata: Any,
    asset_id: str,
    registry: MetricRegistry,
    reported_at: datetime,
    strict: bool = False,
) -> list[EvalRecord]:
    """Parse the evaluation block of one card into normalized EvalRecords.

    A present-but-invalid block yields zero records with a warning (or
    raises MalformedMetadata when strict). Duplicate uniqueness keys within
    one card keep the last occurrence; the conflict is logged.
    """
    try:
        results = _extract_results(card_metadata)
    except (MalformedMetadata, yaml.YAMLError) as exc:
        if strict:
            if isinstance(exc, MalformedMetadata):
                raise
            raise MalformedMetadata(str(exc)) from exc
        logger.warning("asset %s: malformed evaluation block: %s", asset_id, exc)
        return []

    by_key: dict[tuple, EvalRecord] = {}
    for result in results:
        if not isinstance(result, Mapping):
            logger.warning("asset %s: skipping non-object result entry", asset_id)
            continue
        dataset = result.get("dataset")
        if not isinstance(dataset, Mapping):
            logger.warning("asset %s: result has no dataset descriptor", asset_id)
            continue
        raw_name = dataset.get("name") or dataset.get("type")
        if not isinstance(raw_name, str) or not raw_name.strip():
            logger.warning("asset %s: result dataset has no usable name", asset_id)
            continue
        benchmark, implementation, language = parse_dataset_name(raw_name)

        metrics = result.get("metrics")
        if not isinstance(metrics, list):
            logger.warning("asset %s: result for %r has no metrics list", asset_id, benchmark)
            continue
        for metric in metrics:
            if not isinstance(metric, Mapping):
                continue
            label = metric.get("name") or metric.get("type")
            if not isinstance(label, str) or not label.strip():
                logger.warning("asset %s: metric without a label skipped", asset_id)
                continue
            coerced = _coerce_score(metric.get("value"))
            if coerced is None:
                logger.warning(
                    "asset %s: metric %r has no numeric value; skipped", asset_id, label
                )
                continue
            score, percent_normalized = coerced
            normalized = normalize_metric(label, registry)
            record = EvalRecord(
                asset_id=asset_id,
                benchmark=benchmark,
                implementation=implementation,
                language=language,
                metric_name=normalized.name,
                metric_config=normalized.config,
                score=score,
                reported_at=reported_at,
                percent_normalized=percent_normalized,
                unrecognized_metric=normalized.unrecognized,
            )
            try:
                record.validate()
            except ValidationError as exc:
                logger.warning("asset %s: dropping invalid record: %s", asset_id, exc)
                continue
            key = record.key()
            previous = by_key.get(key)
            if previous is not None and previous.score != record.score:
                logger.warning(
                    "asset %s: conflicting duplicate report for %s (%s vs %s); keeping last",
                    asset_id,
                    key[1:],
                    previous.score,
                    record.score,
                )
            by_key[key] = record
    return list(by_key.values())
