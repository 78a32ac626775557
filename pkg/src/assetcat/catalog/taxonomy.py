"""Loader for the SE-task taxonomy file.

The taxonomy is swappable config: a UTF-8 JSON array of objects with keys
task_id, task_name, sdlc_stage, lexicon, and optional ambiguity_terms.
Unknown keys are rejected so typos fail loudly instead of silently.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..errors import ParseError, ValidationError
from .types import SDLCStage, TaxonomyEntry

_ALLOWED_KEYS = {"task_id", "task_name", "sdlc_stage", "lexicon", "ambiguity_terms"}
_REQUIRED_KEYS = {"task_id", "task_name", "sdlc_stage", "lexicon"}


def load_taxonomy(source: str) -> list[TaxonomyEntry]:
    """Parse a taxonomy document into validated entries.

    Raises ParseError for malformed JSON (with line/position) and
    ValidationError for duplicate ids, empty lexicons, or unknown stages.
    """
    try:
        payload = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"taxonomy is not valid JSON: {exc.msg}", exc.lineno, exc.colno) from exc

    if not isinstance(payload, list):
        raise ParseError("taxonomy document must be a top-level array")

    entries: list[TaxonomyEntry] = []
    seen: set[str] = set()
    for index, raw in enumerate(payload):
        if not isinstance(raw, dict):
            raise ParseError(f"taxonomy entry #{index} is not an object")
        unknown = set(raw) - _ALLOWED_KEYS
        if unknown:
            raise ValidationError(
                f"taxonomy entry #{index} has unknown keys: {', '.join(sorted(unknown))}"
            )
        missing = _REQUIRED_KEYS - set(raw)
        if missing:
            raise ValidationError(
                f"taxonomy entry #{index} is missing keys: {', '.join(sorted(missing))}"
            )
        stage_raw = raw["sdlc_stage"]
        try:
            stage = SDLCStage(stage_raw)
        except ValueError:
            raise ValidationError(
                f"taxonomy entry {raw.get('task_id')!r} has unknown sdlc_stage {stage_raw!r}"
            ) from None
        lexicon = raw["lexicon"]
        if not isinstance(lexicon, list) or not all(isinstance(t, str) and t for t in lexicon):
            raise ValidationError(
                f"taxonomy entry {raw.get('task_id')!r} lexicon must be a list of non-empty strings"
            )
        ambiguity = raw.get("ambiguity_terms", [])
        if not isinstance(ambiguity, list) or not all(isinstance(t, str) for t in ambiguity):
            raise ValidationError(
                f"taxonomy entry {raw.get('task_id')!r} ambiguity_terms must be a list of strings"
            )
        entry = TaxonomyEntry(
            task_id=raw["task_id"],
            task_name=raw["task_name"],
            sdlc_stage=stage,
            lexicon=list(lexicon),
            ambiguity_terms=list(ambiguity),
        )
        entry.validate()
        if entry.task_id in seen:
            raise ValidationError(f"duplicate task_id {entry.task_id!r}")
        seen.add(entry.task_id)
        entries.append(entry)
    return entries


def load_taxonomy_file(path: str | Path) -> list[TaxonomyEntry]:
    return load_taxonomy(Path(path).read_text(encoding="utf-8"))


def load_seed_taxonomy() -> list[TaxonomyEntry]:
    """Load the seed taxonomy shipped with the package."""
    source = resources.files("assetcat.data").joinpath("taxonomy_seed.json").read_text("utf-8")
    return load_taxonomy(source)
