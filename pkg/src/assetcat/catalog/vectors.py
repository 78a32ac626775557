"""Sparse tf-idf document vectors and cosine similarity.

Tokenization lowercases and splits on non-alphanumerics. Weights are raw
term frequency scaled by idf = ln((N+1)/(df+1)) + 1, computed over the
current catalogue snapshot; idf statistics are refit once per ingestion
batch, so vectors are deterministic given (text, corpus).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass
class DocumentVector:
    terms: dict[str, float] = field(default_factory=dict)
    norm: float = 0.0

    @classmethod
    def from_weights(cls, terms: dict[str, float]) -> DocumentVector:
        return cls(terms=terms, norm=math.sqrt(sum(w * w for w in terms.values())))


def cosine_similarity(a: DocumentVector, b: DocumentVector) -> float:
    """dot(a, b) / (norm(a) * norm(b)); 0.0 when either vector is empty.

    Weights are non-negative, so the result lies in [0, 1].
    """
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    if len(b.terms) < len(a.terms):
        a, b = b, a
    dot = sum(weight * b.terms.get(term, 0.0) for term, weight in a.terms.items())
    return dot / (a.norm * b.norm)


class VectorSpace:
    """tf-idf weighting context fit on one corpus snapshot."""

    def __init__(self) -> None:
        self._doc_count = 0
        self._df: Counter[str] = Counter()

    @property
    def doc_count(self) -> int:
        return self._doc_count

    def fit(self, documents: list[str]) -> VectorSpace:
        self._doc_count = len(documents)
        self._df = Counter()
        for text in documents:
            self._df.update(set(tokenize(text)))
        return self

    def idf(self, term: str) -> float:
        return math.log((self._doc_count + 1) / (self._df.get(term, 0) + 1)) + 1.0

    def vectorize(self, text: str) -> DocumentVector:
        """Weight each token by tf * idf; empty text yields the zero vector."""
        counts = Counter(tokenize(text))
        if not counts:
            return DocumentVector()
        weights = {term: tf * self.idf(term) for term, tf in counts.items()}
        return DocumentVector.from_weights(weights)


def centroid(vectors: list[DocumentVector]) -> DocumentVector:
    """Arithmetic mean of the given vectors (zero vector for empty input)."""
    if not vectors:
        return DocumentVector()
    sums: dict[str, float] = {}
    for vec in vectors:
        for term, weight in vec.terms.items():
            sums[term] = sums.get(term, 0.0) + weight
    n = len(vectors)
    return DocumentVector.from_weights({term: total / n for term, total in sums.items()})
