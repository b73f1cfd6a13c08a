"""TF-IDF keyword extraction and cosine-similarity recommendation.

Weighting is the plainest auditable variant: raw term counts times the
natural log of N/df. A token present in every document weighs zero.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Mapping, Sequence

from scicafe.knowledge.errors import EmptyDocument
from scicafe.knowledge.tokenize import Document


def extract_keywords(
    doc: Document, corpus: Sequence[Document], k: int
) -> list[tuple[str, float]]:
    """Top-k tokens of ``doc`` by tf-idf against ``corpus``.

    Ties break lexicographically ascending. Zero-weight tokens still rank
    (a single-document corpus yields all zeros, ordered alphabetically).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not corpus:
        raise ValueError("corpus must be non-empty")
    if not any(d.id == doc.id for d in corpus):
        raise ValueError(f"document {doc.id!r} is not part of the corpus")
    tokens = doc.tokens
    if not tokens:
        raise EmptyDocument(f"document {doc.id!r} has no tokens after filtering")

    n_docs = len(corpus)
    doc_tokens = [set(d.tokens) for d in corpus]
    counts = Counter(tokens)
    weighted = []
    for token, tf in counts.items():
        df = sum(1 for toks in doc_tokens if token in toks)
        weighted.append((token, tf * math.log(n_docs / df)))
    weighted.sort(key=lambda pair: (-pair[1], pair[0]))
    return weighted[:k]


def keyword_vector(weights: Mapping[str, float]) -> dict[str, float]:
    """Normalize non-negative weights to unit Euclidean length.

    The zero vector stays zero; everything else comes out with norm 1.
    """
    if any(w < 0 for w in weights.values()):
        raise ValueError("keyword weights must be non-negative")
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm == 0:
        return {t: 0.0 for t in weights}
    return {t: w / norm for t, w in weights.items()}


def document_vector(doc: Document, corpus: Sequence[Document]) -> dict[str, float]:
    """Unit-length tf-idf vector over every token of ``doc``."""
    ranked = extract_keywords(doc, corpus, k=len(set(doc.tokens)))
    return keyword_vector(dict(ranked))


def recommend(
    profile: Mapping[str, float],
    items: Sequence[tuple[str, Mapping[str, float]]],
    k: int,
    min_score: float | None = None,
) -> list[tuple[str, float]]:
    """Rank items by cosine similarity to the profile.

    Scores are dot products of unit vectors; ties break by ascending item
    id. A zero profile matches nothing. When ``min_score`` is given, only
    items scoring strictly above it are returned.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    unit_profile = keyword_vector(profile)
    if not any(unit_profile.values()):
        return []
    scored = []
    for item_id, vector in items:
        unit_item = keyword_vector(vector)
        score = sum(unit_profile.get(t, 0.0) * w for t, w in unit_item.items())
        if min_score is not None and score <= min_score:
            continue
        scored.append((item_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]
