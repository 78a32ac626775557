"""Independent oracles used to check the production code paths.

Everything here is deliberately implemented from the documented contracts
by a different route than the package (brute force, enumeration, direct
arithmetic) and must stay free of imports from the modules it checks.
"""

from __future__ import annotations

import math
from collections import deque


# -- vector arithmetic --------------------------------------------------------


def dot_product(a: dict[str, float], b: dict[str, float]) -> float:
    return sum(weight * b.get(term, 0.0) for term, weight in a.items())


def cosine(a: dict[str, float], b: dict[str, float]) -> float:
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot_product(a, b) / (norm_a * norm_b)


# -- duplicate grouping --------------------------------------------------------


def closure_groups(
    ids: list[str],
    similarity: dict[tuple[str, str], float],
    threshold: float,
    created_at: dict[str, object],
) -> list[tuple[str, frozenset[str]]]:
    """Brute-force transitive closure over the pairwise similarity matrix.

    Returns (canonical_id, member set) tuples sorted by canonical id.
    Canonical member: earliest created_at, ties by smallest asset_id.
    """

    def sim(x: str, y: str) -> float:
        return similarity.get((x, y), similarity.get((y, x), 0.0))

    unvisited = set(ids)
    groups = []
    while unvisited:
        seed = min(unvisited)
        members = {seed}
        queue = deque([seed])
        unvisited.discard(seed)
        while queue:
            current = queue.popleft()
            for other in list(unvisited):
                if sim(current, other) >= threshold:
                    members.add(other)
                    unvisited.discard(other)
                    queue.append(other)
        canonical = min(members, key=lambda m: (created_at[m], m))
        groups.append((canonical, frozenset(members)))
    groups.sort(key=lambda g: g[0])
    return groups


# -- agreement ------------------------------------------------------------------


def cohens_kappa(gold: list[bool], predicted: list[bool]) -> float:
    """Cohen's kappa over paired binary labels."""
    assert len(gold) == len(predicted) and gold
    n = len(gold)
    agree = sum(1 for g, p in zip(gold, predicted) if g == p)
    po = agree / n
    gold_yes = sum(gold) / n
    pred_yes = sum(predicted) / n
    pe = gold_yes * pred_yes + (1 - gold_yes) * (1 - pred_yes)
    if pe == 1.0:
        return 1.0
    return (po - pe) / (1 - pe)


# -- ranking ---------------------------------------------------------------------


def rank_oracle(rows: list[dict], higher_is_better: bool) -> list[str]:
    """Comparator-sort oracle for the leaderboard ordering contract.

    rows carry: asset_id, name, score, likes. Returns asset_ids in rank
    order: score per direction, likes descending, name ascending
    (case-insensitive, ties by exact name), asset_id ascending.
    """

    def key(row: dict):
        score = -row["score"] if higher_is_better else row["score"]
        return (score, -row["likes"], row["name"].casefold(), row["name"], row["asset_id"])

    return [row["asset_id"] for row in sorted(rows, key=key)]


# -- sliding-window rate counting ---------------------------------------------------


def max_grants_in_window(grant_times: list[float], window: float = 60.0) -> int:
    """Maximum number of grants inside any closed window of the given length."""
    times = sorted(grant_times)
    best = 0
    for i, start in enumerate(times):
        j = i
        while j < len(times) and times[j] <= start + window:
            j += 1
        best = max(best, j - i)
    return best
