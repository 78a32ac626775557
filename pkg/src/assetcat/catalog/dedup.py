"""Near-duplicate grouping via pairwise cosine similarity.

Two assets land in the same group when connected by pairwise similarity at
or above the threshold (transitive closure). The earliest-created member
(ties: lexicographically smallest asset_id) is canonical; the rest stay in
the store flagged as duplicates and drop out of default query results.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .types import AssetRecord
from .vectors import DocumentVector, cosine_similarity

DEFAULT_DEDUP_THRESHOLD = 0.95


@dataclass
class DuplicateGroup:
    canonical_id: str
    member_ids: frozenset[str]


class _UnionFind:
    def __init__(self, items: list[str]):
        self._parent = {item: item for item in items}

    def find(self, item: str) -> str:
        root = item
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[item] != root:
            self._parent[item], item = root, self._parent[item]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[rb] = ra


def deduplicate(
    assets: list[AssetRecord],
    vectors: dict[str, DocumentVector],
    threshold: float = DEFAULT_DEDUP_THRESHOLD,
) -> list[DuplicateGroup]:
    """Partition assets into duplicate groups; result is invariant under
    input permutation and covers every asset exactly once."""
    ids = [a.asset_id for a in assets]
    uf = _UnionFind(ids)

    # Vectors with no shared term have similarity 0, so only pairs that share
    # at least one term need a dot product.
    postings: dict[str, list[str]] = defaultdict(list)
    for asset_id in sorted(ids):
        for term in vectors[asset_id].terms:
            postings[term].append(asset_id)
    candidate_pairs: set[tuple[str, str]] = set()
    for doc_ids in postings.values():
        for i, left in enumerate(doc_ids):
            for right in doc_ids[i + 1 :]:
                candidate_pairs.add((left, right))

    for left, right in candidate_pairs:
        if cosine_similarity(vectors[left], vectors[right]) >= threshold:
            uf.union(left, right)

    by_root: dict[str, list[str]] = defaultdict(list)
    for asset_id in ids:
        by_root[uf.find(asset_id)].append(asset_id)

    by_id = {a.asset_id: a for a in assets}
    groups = []
    for members in by_root.values():
        canonical = min(members, key=lambda m: (by_id[m].created_at, m))
        groups.append(DuplicateGroup(canonical_id=canonical, member_ids=frozenset(members)))
    groups.sort(key=lambda g: g.canonical_id)
    return groups


def apply_duplicate_marks(assets: list[AssetRecord], groups: list[DuplicateGroup]) -> None:
    """Set duplicate_of on non-canonical members; clear it on canonicals."""
    canonical_for: dict[str, str] = {}
    for group in groups:
        for member in group.member_ids:
            canonical_for[member] = group.canonical_id
    for asset in assets:
        canonical = canonical_for.get(asset.asset_id, asset.asset_id)
        asset.duplicate_of = None if canonical == asset.asset_id else canonical
