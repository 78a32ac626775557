"""Lexicon-based SE-task classification and lexical-outlier rejection.

An asset is classified against every taxonomy entry by boundary-safe,
case-insensitive phrase matching over its documentation (card text,
metadata tags, linked abstract). Matches that hit only polysemous lexicon
terms are second-guessed by comparing the asset's tf-idf vector to the
centroid of the task's unambiguous members.
"""

from __future__ import annotations

import logging
import re
import statistics
from dataclasses import dataclass, field

from ..errors import MissingDocumentation
from .types import AssetRecord, SETaskAssignment, TaxonomyEntry
from .vectors import DocumentVector, centroid, cosine_similarity

logger = logging.getLogger(__name__)

_SNIPPET_CONTEXT = 80
_SPLIT_RE = re.compile(r"[\s\-_]+")


def _phrase_pattern(term: str) -> re.Pattern[str]:
    """Compile a boundary-safe pattern for a lexicon word or phrase.

    Separators inside the phrase match whitespace, hyphens, or underscores,
    so "code generation" also hits "code-generation" tags.
    """
    parts = [re.escape(p) for p in _SPLIT_RE.split(term.strip().lower()) if p]
    body = r"[\s\-_]+".join(parts)
    return re.compile(rf"(?<![a-z0-9])(?:{body})(?![a-z0-9])", re.IGNORECASE)


_PATTERN_CACHE: dict[str, re.Pattern[str]] = {}


def _pattern(term: str) -> re.Pattern[str]:
    pattern = _PATTERN_CACHE.get(term)
    if pattern is None:
        pattern = _PATTERN_CACHE[term] = _phrase_pattern(term)
    return pattern


def _snippet(text: str, start: int, end: int) -> str:
    """Verbatim context window around a match, preferring line boundaries."""
    lo = max(0, start - _SNIPPET_CONTEXT)
    hi = min(len(text), end + _SNIPPET_CONTEXT)
    line_start = text.rfind("\n", 0, start) + 1
    if line_start >= lo:
        lo = line_start
    elif lo > 0:
        space = text.find(" ", lo, start)
        if space != -1:
            lo = space + 1
    line_end = text.find("\n", end)
    if line_end != -1 and line_end <= hi:
        hi = line_end
    elif hi < len(text):
        space = text.rfind(" ", end, hi)
        if space != -1:
            hi = space
    return text[lo:hi].strip()


def similarity_text(asset: AssetRecord) -> str:
    """Document used for cosine similarity: full card text plus metadata tags."""
    tags = ", ".join(sorted(asset.ml_tasks))
    return f"{asset.card_text}\n{tags}" if tags else asset.card_text


@dataclass
class TaskMatch:
    """One taxonomy hit with enough provenance to drive outlier checks."""

    assignment: SETaskAssignment
    matched_terms: set[str] = field(default_factory=set)
    ambiguous_only: bool = False


def classify_with_matches(asset: AssetRecord, taxonomy: list[TaxonomyEntry]) -> list[TaskMatch]:
    """Match every taxonomy entry against the asset's documentation.

    Raises MissingDocumentation when the card text is absent; such assets
    are skipped by the pipeline and never catalogued.
    """
    if not asset.card_text or not asset.card_text.strip():
        raise MissingDocumentation(f"asset {asset.asset_id!r} has no card text")

    raw_tags = sorted(asset.ml_tasks)
    tag_blob = ", ".join(raw_tags)
    abstract = asset.abstract_text or ""

    matches: list[TaskMatch] = []
    for entry in taxonomy:
        matched: set[str] = set()
        best_card: tuple[int, int] | None = None
        best_abstract: tuple[int, int] | None = None
        tag_hit: str | None = None
        for term in entry.lexicon:
            pattern = _pattern(term)
            hit = pattern.search(asset.card_text)
            if hit:
                matched.add(term)
                if best_card is None or hit.start() < best_card[0]:
                    best_card = hit.span()
                continue
            if abstract:
                hit = pattern.search(abstract)
                if hit:
                    matched.add(term)
                    if best_abstract is None or hit.start() < best_abstract[0]:
                        best_abstract = hit.span()
                    continue
            if tag_blob and pattern.search(tag_blob):
                matched.add(term)
                if tag_hit is None:
                    tag_hit = next(t for t in raw_tags if pattern.search(t))
        if not matched:
            continue

        if best_card is not None:
            rationale = _snippet(asset.card_text, *best_card)
        elif best_abstract is not None:
            rationale = _snippet(abstract, *best_abstract)
        else:
            rationale = tag_hit or ""

        ambiguity = {t.lower() for t in entry.ambiguity_terms}
        confidence = len(matched) / len(entry.lexicon)
        confidence = min(1.0, max(0.1, confidence))
        matches.append(
            TaskMatch(
                assignment=SETaskAssignment(
                    task_id=entry.task_id, confidence=confidence, rationale=rationale
                ),
                matched_terms=matched,
                ambiguous_only=all(t.lower() in ambiguity for t in matched),
            )
        )

    matches.sort(key=lambda m: (-m.assignment.confidence, m.assignment.task_id))
    return matches


def classify_asset(asset: AssetRecord, taxonomy: list[TaxonomyEntry]) -> list[SETaskAssignment]:
    """Assignments for every taxonomy entry matched by the documentation,
    sorted by confidence descending. Empty result means not SE-relevant."""
    return [m.assignment for m in classify_with_matches(asset, taxonomy)]


def outlier_threshold(member_similarities: list[float], floor: float = 0.05) -> float:
    """Rejection cutoff: max(floor, median - 3 * MAD) of the cohort's
    similarities to its own centroid. Robust to small cohorts."""
    med = statistics.median(member_similarities)
    mad = statistics.median(abs(s - med) for s in member_similarities)
    return max(floor, med - 3.0 * mad)


@dataclass
class OutlierDecision:
    asset_id: str
    task_id: str
    similarity: float
    threshold: float
    kept: bool
    insufficient_context: bool = False


@dataclass
class OutlierPartition:
    kept: list[tuple[AssetRecord, SETaskAssignment]] = field(default_factory=list)
    rejected: list[tuple[AssetRecord, SETaskAssignment]] = field(default_factory=list)
    decisions: list[OutlierDecision] = field(default_factory=list)


def detect_lexical_outliers(
    candidates: list[tuple[AssetRecord, SETaskAssignment]],
    candidate_vectors: dict[str, DocumentVector],
    cohort_vectors: dict[str, list[DocumentVector]],
    floor: float = 0.05,
) -> OutlierPartition:
    """Partition ambiguous-only matches into kept and rejected.

    candidate_vectors maps asset_id to its similarity vector; cohort_vectors
    maps task_id to the vectors of that task's non-ambiguous members. A task
    with no such members cannot form a centroid: the candidate is kept and
    flagged low-confidence instead of being silently dropped.
    """
    partition = OutlierPartition()
    centroids: dict[str, tuple[DocumentVector, float]] = {}
    for asset, assignment in candidates:
        members = cohort_vectors.get(assignment.task_id, [])
        if not members:
            assignment.low_confidence = True
            partition.kept.append((asset, assignment))
            partition.decisions.append(
                OutlierDecision(
                    asset_id=asset.asset_id,
                    task_id=assignment.task_id,
                    similarity=0.0,
                    threshold=0.0,
                    kept=True,
                    insufficient_context=True,
                )
            )
            logger.info(
                "task %s has no unambiguous members; keeping %s with low confidence",
                assignment.task_id,
                asset.asset_id,
            )
            continue
        cached = centroids.get(assignment.task_id)
        if cached is None:
            center = centroid(members)
            threshold = outlier_threshold(
                [cosine_similarity(m, center) for m in members], floor
            )
            cached = centroids[assignment.task_id] = (center, threshold)
        center, threshold = cached
        similarity = cosine_similarity(candidate_vectors[asset.asset_id], center)
        kept = similarity >= threshold
        partition.decisions.append(
            OutlierDecision(
                asset_id=asset.asset_id,
                task_id=assignment.task_id,
                similarity=similarity,
                threshold=threshold,
                kept=kept,
            )
        )
        if kept:
            partition.kept.append((asset, assignment))
        else:
            partition.rejected.append((asset, assignment))
            logger.info(
                "rejected %s for task %s as lexical outlier (%.3f < %.3f)",
                asset.asset_id,
                assignment.task_id,
                similarity,
                threshold,
            )
    return partition
