"""Model-index parsing, dataset-name grammar, and metric normalization."""

from __future__ import annotations

import json

import pytest

from assetcat.errors import MalformedMetadata
from assetcat.leaderboard.cardparse import (
    parse_dataset_name,
    parse_eval_metadata,
    split_front_matter,
)
from assetcat.leaderboard.metrics import default_registry, normalize_metric, split_metric_config
from assetcat.leaderboard.types import MetricDirection

from .conftest import FIXTURES_DIR, T0

CARDS_DIR = FIXTURES_DIR / "leaderboard_cards"


@pytest.mark.parametrize(
    "name, expected",
    [
        ("HumanEval (Explain, C++)", ("HumanEval", "Explain", "C++")),
        ("HumanEval (Explain)", ("HumanEval", "Explain", None)),
        ("HumanEval", ("HumanEval", None, None)),
        ("Suite (A, B, C)", ("Suite (A, B, C)", None, None)),
        ("Weird (x (y))", ("Weird (x (y))", None, None)),
        ("  MBPP  ", ("MBPP", None, None)),
        ("Edge ()", ("Edge ()", None, None)),
        ("Edge ( , )", ("Edge ( , )", None, None)),
    ],
)
def test_dataset_name_grammar(name, expected):
    assert parse_dataset_name(name) == expected


def test_metric_config_split():
    assert split_metric_config("pass@1 (threshold 0.2)") == ("pass@1", "threshold 0.2")
    assert split_metric_config("pass@1") == ("pass@1", None)
    assert split_metric_config("pass@1 ()") == ("pass@1", None)


def test_normalize_metric_case_folds_to_alias():
    registry = default_registry()
    name, config, direction, unrecognized = normalize_metric("Pass@1", registry)
    assert (name, config, direction, unrecognized) == (
        "pass@1",
        None,
        MetricDirection.HIGHER_IS_BETTER,
        False,
    )


def test_normalize_metric_strips_config():
    registry = default_registry()
    result = normalize_metric("pass@1 (threshold 0.2)", registry)
    assert result.name == "pass@1"
    assert result.config == "threshold 0.2"
    assert result.direction is MetricDirection.HIGHER_IS_BETTER


def test_normalize_metric_passthrough_for_unknown():
    registry = default_registry()
    result = normalize_metric("My-Custom-Metric", registry)
    assert result.name == "my-custom-metric"
    assert result.unrecognized
    assert result.direction is MetricDirection.HIGHER_IS_BETTER


def test_lower_is_better_direction_from_registry():
    registry = default_registry()
    assert normalize_metric("PPL", registry).direction is MetricDirection.LOWER_IS_BETTER


def test_empty_evaluation_block_yields_no_records(registry):
    assert parse_eval_metadata({"model-index": []}, "hub/x", registry, T0) == []
    assert parse_eval_metadata(None, "hub/x", registry, T0) == []


def test_malformed_block_strict_raises(registry):
    with pytest.raises(MalformedMetadata):
        parse_eval_metadata({"model-index": {"oops": 1}}, "hub/x", registry, T0, strict=True)


def test_malformed_block_lenient_returns_empty_with_warning(registry, caplog):
    with caplog.at_level("WARNING"):
        records = parse_eval_metadata({"model-index": {"oops": 1}}, "hub/x", registry, T0)
    assert records == []
    assert any("malformed" in message.lower() for message in caplog.messages)


def test_front_matter_split_round_trip():
    text = "---\nlicense: mit\n---\n# Body\ncontent\n"
    metadata, body = split_front_matter(text)
    assert metadata == {"license": "mit"}
    assert body == "# Body\ncontent\n"
    assert split_front_matter("no front matter") == (None, "no front matter")


def _record_dict(record) -> dict:
    return {
        "benchmark": record.benchmark,
        "implementation": record.implementation,
        "language": record.language,
        "metric_name": record.metric_name,
        "metric_config": record.metric_config,
        "score": record.score,
        "percent_normalized": record.percent_normalized,
        "unrecognized_metric": record.unrecognized_metric,
    }


def test_corpus_cards_parse_to_hand_labeled_records(registry):
    """25-card fixture corpus: exact field equality against the frozen
    hand labels; malformed blocks must fabricate nothing."""
    expected = json.loads((CARDS_DIR / "expected.json").read_text(encoding="utf-8"))
    assert len(expected) == 25
    for name, want in sorted(expected.items()):
        card_text = (CARDS_DIR / name).read_text(encoding="utf-8")
        metadata, _body = split_front_matter(card_text)
        records = parse_eval_metadata(metadata, f"hub/{name}", registry, T0)
        got = sorted(
            (_record_dict(r) for r in records),
            key=lambda r: (r["benchmark"], r["metric_name"], r["implementation"] or ""),
        )
        want = sorted(
            want, key=lambda r: (r["benchmark"], r["metric_name"], r["implementation"] or "")
        )
        assert got == want, f"mismatch for {name}"


def test_reingesting_same_card_is_idempotent(registry):
    card_text = (CARDS_DIR / "11-multi-results.md").read_text(encoding="utf-8")
    metadata, _ = split_front_matter(card_text)
    first = parse_eval_metadata(metadata, "hub/kilo", registry, T0)
    second = parse_eval_metadata(metadata, "hub/kilo", registry, T0)
    assert {r.key() for r in first} == {r.key() for r in second}
    assert len({r.key() for r in first}) == len(first)


def test_parse_conservatism_never_invents_fields(registry):
    # Every emitted benchmark/metric/score must literally come from the doc.
    for path in sorted(CARDS_DIR.glob("*.md")):
        text = path.read_text(encoding="utf-8")
        metadata, _ = split_front_matter(text)
        for record in parse_eval_metadata(metadata, "hub/x", registry, T0):
            assert record.benchmark in text or record.benchmark.lower() in text.lower()
            raw_scores = [str(record.score), f"{record.score * 100:g}%", f"{record.score:g}"]
            assert any(s in text for s in raw_scores), (path.name, record.score)
