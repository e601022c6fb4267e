"""Threshold-tunable ranked retrieval over a loaded spot index."""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from kwspot.index import SpotIndex
from kwspot.relevance import Method


@dataclass(frozen=True)
class Hit:
    rank: int
    region_id: str
    score: float
    span: tuple[int, int] | None


@dataclass
class QueryResult:
    query: str
    tau: float
    hits: list[Hit]
    detected_count: int       # matches above tau before the limit truncation
    out_of_lexicon: bool


def search(ix: SpotIndex, query: str, tau: float = 0.5, limit: int = 100) -> QueryResult:
    """All indexed regions whose score strictly exceeds tau, best first.

    Ranking is score descending with region id as the tie-break; `limit` only
    truncates, never reorders.  Unknown words return an empty, flagged result.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if ix.method is not Method.BLOCK_SUM and tau > 1.0:
        raise ValueError(f"tau must be <= 1 for {ix.method.value} indices, got {tau}")
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")

    postings = ix.entries.get(query)
    if postings is None:
        return QueryResult(query=query, tau=tau, hits=[], detected_count=0, out_of_lexicon=True)

    # postings are sorted by score descending: find the first score <= tau
    cutoff = bisect.bisect_left(postings, True, key=lambda p: p.score <= tau)
    hits = [
        Hit(rank=k + 1, region_id=p.region_id, score=p.score, span=p.span)
        for k, p in enumerate(postings[:min(cutoff, limit)])
    ]
    return QueryResult(query=query, tau=tau, hits=hits,
                       detected_count=cutoff, out_of_lexicon=False)


def suggest(ix: SpotIndex, prefix: str, limit: int = 20) -> list[str]:
    """Indexed words starting with `prefix`, lexicographic, at most `limit`."""
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    words = ix.words  # insertion order is sorted (build and load both sort)
    out: list[str] = []
    for k in range(bisect.bisect_left(words, prefix), len(words)):
        if len(out) >= limit or not words[k].startswith(prefix):
            break
        out.append(words[k])
    return out
