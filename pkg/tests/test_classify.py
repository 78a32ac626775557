"""Lexicon classification, rationale extraction, and outlier rejection."""

from __future__ import annotations

import pytest

from assetcat.catalog.classify import (
    classify_asset,
    classify_with_matches,
    detect_lexical_outliers,
    outlier_threshold,
    similarity_text,
)
from assetcat.catalog.types import SDLCStage, TaxonomyEntry
from assetcat.catalog.vectors import VectorSpace, centroid
from assetcat.errors import MissingDocumentation

from .conftest import make_model
from .oracles import cohens_kappa, cosine as cosine_oracle


def entry(task_id: str, lexicon: list[str], ambiguous: list[str] | None = None) -> TaxonomyEntry:
    return TaxonomyEntry(
        task_id=task_id,
        task_name=task_id,
        sdlc_stage=SDLCStage.IMPLEMENTATION,
        lexicon=lexicon,
        ambiguity_terms=ambiguous or [],
    )


MINI_TAXONOMY = [
    entry("code-generation", ["code generation", "generate code", "program synthesis"]),
    entry("code-summarization", ["code summarization", "docstring generation"]),
    entry("bug-prediction", ["bug prediction", "defect prediction", "bug"], ["bug"]),
    entry("program-repair", ["program repair", "patch generation", "patch"], ["patch"]),
]


def test_direct_lexicon_hit_produces_assignment_with_rationale():
    asset = make_model(card_text="this model performs code generation for C++ projects")
    assignments = classify_asset(asset, MINI_TAXONOMY)
    assert len(assignments) == 1
    assert assignments[0].task_id == "code-generation"
    assert "code generation" in assignments[0].rationale


def test_no_lexicon_match_yields_empty_list():
    asset = make_model(card_text="a recipe collection for sourdough bread baking")
    assert classify_asset(asset, MINI_TAXONOMY) == []


def test_missing_card_text_raises():
    asset = make_model(card_text="   ")
    with pytest.raises(MissingDocumentation):
        classify_asset(asset, MINI_TAXONOMY)


def test_classification_is_deterministic():
    asset = make_model(
        card_text="code generation plus docstring generation for legacy code",
        ml_tasks={"text-generation"},
    )
    first = classify_asset(asset, MINI_TAXONOMY)
    second = classify_asset(asset, MINI_TAXONOMY)
    assert [(a.task_id, a.confidence, a.rationale) for a in first] == [
        (a.task_id, a.confidence, a.rationale) for a in second
    ]


def test_confidence_is_fractional_lexicon_coverage_clamped():
    asset = make_model(card_text="we do code generation and generate code on demand")
    (assignment,) = classify_asset(asset, MINI_TAXONOMY)
    # 2 of 3 lexicon terms matched.
    assert assignment.confidence == pytest.approx(2 / 3)

    one_of_many = entry("wide", [f"term {i}" for i in range(20)])
    asset = make_model(card_text="contains term 3 only")
    (assignment,) = classify_asset(asset, [one_of_many])
    assert assignment.confidence == 0.1  # clamped floor


def test_assignments_sorted_by_confidence_descending():
    asset = make_model(
        card_text="code generation, generate code, program synthesis, and code summarization"
    )
    assignments = classify_asset(asset, MINI_TAXONOMY)
    confidences = [a.confidence for a in assignments]
    assert confidences == sorted(confidences, reverse=True)
    assert assignments[0].task_id == "code-generation"


def test_rationale_is_verbatim_substring_of_documentation():
    card = (
        "# Intro\nThis checkpoint was tuned for bug prediction over Java builds.\n"
        "It also supports patch generation workflows.\n"
    )
    asset = make_model(card_text=card, ml_tasks={"code-generation"})
    for assignment in classify_asset(asset, MINI_TAXONOMY + [entry("tagged", ["code generation"])]):
        documentation = card + "\n" + ", ".join(sorted(asset.ml_tasks))
        assert assignment.rationale in documentation


def test_tag_only_match_uses_tag_as_rationale():
    asset = make_model(card_text="no relevant phrases here", ml_tasks={"code-generation"})
    assignments = classify_asset(asset, MINI_TAXONOMY)
    assert [a.task_id for a in assignments] == ["code-generation"]
    assert assignments[0].rationale == "code-generation"


def test_abstract_text_participates_in_matching():
    asset = make_model(card_text="weights for a transformer")
    asset.abstract_text = "We evaluate program synthesis benchmarks."
    (assignment,) = classify_asset(asset, MINI_TAXONOMY)
    assert assignment.task_id == "code-generation"
    assert assignment.rationale in asset.abstract_text


def test_word_boundaries_prevent_substring_false_hits():
    asset = make_model(card_text="debugging buggy code; nothing else")
    assert classify_asset(asset, MINI_TAXONOMY) == []


def test_ambiguous_only_flag():
    firm = make_model(card_text="defect prediction for modules with bug counts")
    (match,) = classify_with_matches(firm, [MINI_TAXONOMY[2]])
    assert not match.ambiguous_only

    ambiguous = make_model(card_text="a catalogue of bug photographs")
    (match,) = classify_with_matches(ambiguous, [MINI_TAXONOMY[2]])
    assert match.ambiguous_only


# -- outlier detection -----------------------------------------------------------


def _vector_context(cards: dict[str, str]):
    space = VectorSpace().fit(list(cards.values()))
    return space, {asset_id: space.vectorize(text) for asset_id, text in cards.items()}


def test_candidate_equal_to_centroid_is_kept():
    cards = {
        "hub/a": "java programs compile to bytecode for the virtual machine",
        "hub/b": "java programs compile to bytecode for the virtual machine",
    }
    _, vectors = _vector_context(cards)
    asset = make_model(asset_id="hub/b", card_text=cards["hub/b"])
    (match,) = classify_with_matches(
        asset, [entry("java-tasks", ["java code", "java"], ["java"])]
    )
    partition = detect_lexical_outliers(
        [(asset, match.assignment)], vectors, {"java-tasks": [vectors["hub/a"]]}
    )
    assert partition.kept and not partition.rejected
    assert partition.decisions[0].similarity == pytest.approx(1.0)


def test_travel_blog_java_match_is_rejected():
    taxonomy = [entry("java-tasks", ["java code", "java"], ["java"])]
    cohort_cards = {
        "hub/jdk-helper": "java code assistant: refactors java classes, generics, and java "
        "interfaces; integrates with maven builds and junit tests",
        "hub/bytecode-tool": "analyzes java code and java bytecode; detects unused imports in "
        "java projects and suggests fixes for maven builds",
        "hub/spring-bot": "generates java code snippets for spring controllers, junit tests "
        "and maven configuration files",
    }
    blog_card = (
        "Travel notes from java: volcano hikes, rice terraces, street food stalls and "
        "sunrise views over the island"
    )
    cards = dict(cohort_cards)
    cards["hub/island-blog"] = blog_card
    _, vectors = _vector_context(cards)

    blog = make_model(asset_id="hub/island-blog", card_text=blog_card)
    (match,) = classify_with_matches(blog, taxonomy)
    assert match.ambiguous_only

    cohort_vectors = [vectors[a] for a in cohort_cards]
    partition = detect_lexical_outliers(
        [(blog, match.assignment)], vectors, {"java-tasks": cohort_vectors}
    )
    assert partition.rejected and not partition.kept

    # Cross-check the decision against the independent cosine oracle.
    center = centroid(cohort_vectors)
    decision = partition.decisions[0]
    assert decision.similarity == pytest.approx(
        cosine_oracle(vectors["hub/island-blog"].terms, center.terms)
    )
    assert decision.similarity < decision.threshold


def test_task_without_unambiguous_members_keeps_candidate_flagged():
    card = "a catalogue of bug photographs from the garden"
    _, vectors = _vector_context({"hub/bugs": card})
    asset = make_model(asset_id="hub/bugs", card_text=card)
    (match,) = classify_with_matches(asset, [MINI_TAXONOMY[2]])
    partition = detect_lexical_outliers([(asset, match.assignment)], vectors, {})
    assert partition.kept and not partition.rejected
    kept_assignment = partition.kept[0][1]
    assert kept_assignment.low_confidence
    assert partition.decisions[0].insufficient_context


def test_raising_threshold_never_rescues_a_rejected_candidate():
    # Monotonicity: the kept set can only shrink as the threshold rises.
    member_sims = [0.62, 0.7, 0.55, 0.81]
    base = outlier_threshold(member_sims)
    candidate_sims = [i / 20 for i in range(21)]
    for lower, higher in [(base, base + 0.1), (0.05, 0.5), (0.2, 0.9)]:
        kept_low = {s for s in candidate_sims if s >= lower}
        kept_high = {s for s in candidate_sims if s >= higher}
        assert kept_high <= kept_low


def test_outlier_threshold_formula():
    # max(0.05, median - 3 * MAD), computed by hand for a fixed cohort.
    sims = [0.8, 0.7, 0.9, 0.6, 0.75]
    median = 0.75
    mad = 0.05  # deviations: 0.05, 0.05, 0.15, 0.15, 0.0 -> median 0.05
    assert outlier_threshold(sims) == pytest.approx(max(0.05, median - 3 * mad))
    assert outlier_threshold([0.02, 0.03, 0.04]) == 0.05  # floor


# -- small gold-label corpus -------------------------------------------------------


MINI_CORPUS = [
    ("hub/gen-1", "Model for code generation from natural language prompts.", {"code-generation"}),
    (
        "hub/gen-2",
        "Can generate code and offers code summarization for legacy functions.",
        {"code-generation", "code-summarization"},
    ),
    (
        "hub/defect-1",
        "Defect prediction using code metrics to estimate bug density across software modules.",
        {"bug-prediction"},
    ),
    (
        "hub/defect-2",
        "Predicts fault-prone classes; trained for bug prediction on software repositories "
        "with defect labels.",
        {"bug-prediction"},
    ),
    (
        "hub/insects",
        "A field guide to bug collecting: beetles, ants and other insects photographed "
        "in gardens.",
        set(),
    ),
    (
        "hub/repair-1",
        "Automated program repair model that generates a patch for each failing test.",
        {"program-repair"},
    ),
    (
        "hub/repair-2",
        "Automated model that suggests a patch for each failing test; trained on diffs "
        "of software fixes.",
        {"program-repair"},
    ),
    (
        "hub/summ-1",
        "Summarization model producing docstring generation for Python code.",
        {"code-summarization"},
    ),
    (
        "hub/sewing",
        "Sewing tutorial: apply an iron-on patch to denim jackets with fabric glue.",
        set(),
    ),
    (
        "hub/repair-3",
        "Fixes compilation failures by patch generation trained on diffs of software fixes.",
        {"program-repair"},
    ),
]


def classify_corpus(corpus, taxonomy):
    """Run classify + outlier rejection the way the pipeline wires them."""
    assets = {aid: make_model(asset_id=aid, card_text=card) for aid, card, _ in corpus}
    space = VectorSpace().fit([similarity_text(a) for a in assets.values()])
    vectors = {aid: space.vectorize(similarity_text(a)) for aid, a in assets.items()}

    matches = {aid: classify_with_matches(asset, taxonomy) for aid, asset in assets.items()}
    cohorts: dict[str, list] = {}
    for aid, task_matches in matches.items():
        for match in task_matches:
            if not match.ambiguous_only:
                cohorts.setdefault(match.assignment.task_id, []).append(vectors[aid])

    predicted: dict[str, set[str]] = {aid: set() for aid, _, _ in corpus}
    ambiguous_pairs = []
    for aid, task_matches in matches.items():
        for match in task_matches:
            if match.ambiguous_only:
                ambiguous_pairs.append((assets[aid], match.assignment))
            else:
                predicted[aid].add(match.assignment.task_id)
    partition = detect_lexical_outliers(ambiguous_pairs, vectors, cohorts)
    for asset, assignment in partition.kept:
        predicted[asset.asset_id].add(assignment.task_id)
    return predicted


def test_mini_corpus_reproduces_gold_labels_with_high_kappa():
    predicted = classify_corpus(MINI_CORPUS, MINI_TAXONOMY)
    task_ids = [e.task_id for e in MINI_TAXONOMY]
    gold_flat, predicted_flat = [], []
    for aid, _, gold in MINI_CORPUS:
        for task in task_ids:
            gold_flat.append(task in gold)
            predicted_flat.append(task in predicted[aid])
    kappa = cohens_kappa(gold_flat, predicted_flat)
    assert kappa >= 0.8, f"kappa {kappa:.3f} below 0.8: predicted={predicted}"
