"""Metric name normalization.

Reported metric labels are inconsistent across cards ("Pass@1",
"pass@1 (threshold 0.2)", "acc"); a small alias registry folds them onto
canonical names with a scoring direction. Unknown labels pass through
lowercased so no reported result is lost, flagged unrecognized.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from ..errors import ValidationError
from .types import MetricDirection

_TRAILING_CONFIG_RE = re.compile(r"^(?P<label>.*?)\s*\((?P<config>[^()]*)\)\s*$")


@dataclass(frozen=True)
class MetricDescriptor:
    canonical_name: str
    direction: MetricDirection
    aliases: frozenset[str]


class NormalizedMetric(NamedTuple):
    name: str
    config: str | None
    direction: MetricDirection
    unrecognized: bool


class MetricRegistry:
    """Alias lookup table; alias sets must be pairwise disjoint."""

    def __init__(self, descriptors: list[MetricDescriptor]):
        self._by_alias: dict[str, MetricDescriptor] = {}
        self.descriptors = descriptors
        for descriptor in descriptors:
            aliases = {a.lower() for a in descriptor.aliases}
            if descriptor.canonical_name.lower() not in aliases:
                raise ValidationError(
                    f"canonical name {descriptor.canonical_name!r} must be one of its own aliases"
                )
            for alias in aliases:
                if alias in self._by_alias:
                    raise ValidationError(f"alias {alias!r} registered for two metrics")
                self._by_alias[alias] = descriptor

    def lookup(self, label: str) -> MetricDescriptor | None:
        return self._by_alias.get(label.strip().lower())


def split_metric_config(raw_label: str) -> tuple[str, str | None]:
    """Split "pass@1 (threshold 0.2)" into ("pass@1", "threshold 0.2")."""
    match = _TRAILING_CONFIG_RE.match(raw_label.strip())
    if match and match.group("label"):
        config = match.group("config").strip()
        return match.group("label").strip(), config or None
    return raw_label.strip(), None


def normalize_metric(raw_label: str, registry: MetricRegistry) -> NormalizedMetric:
    """Canonicalize a reported metric label; total over non-empty labels."""
    label, config = split_metric_config(raw_label)
    descriptor = registry.lookup(label)
    if descriptor is not None:
        return NormalizedMetric(descriptor.canonical_name, config, descriptor.direction, False)
    return NormalizedMetric(label.lower(), config, MetricDirection.HIGHER_IS_BETTER, True)


def load_registry(source: str) -> MetricRegistry:
    payload = json.loads(source)
    if not isinstance(payload, list):
        raise ValidationError("metric registry must be a top-level array")
    descriptors = []
    for raw in payload:
        descriptors.append(
            MetricDescriptor(
                canonical_name=raw["canonical_name"],
                direction=MetricDirection(raw["direction"]),
                aliases=frozenset(raw.get("aliases", [raw["canonical_name"]])),
            )
        )
    return MetricRegistry(descriptors)


def load_registry_file(path: str | Path) -> MetricRegistry:
    return load_registry(Path(path).read_text(encoding="utf-8"))


def default_registry() -> MetricRegistry:
    source = resources.files("assetcat.data").joinpath("metric_registry.json").read_text("utf-8")
    return load_registry(source)
