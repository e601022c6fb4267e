"""Line-region relevance estimators: how likely a word is written in a region.

Five ways to score P(region contains word), from the naive 1-best transcript
lookup to the exact path-mass computation, plus a brute-force enumeration
oracle for testing and the loss-derived yes/no decision rule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from kwspot import _backend
from kwspot.lattice import WordGraph, enumerate_paths, one_best_path
from kwspot.posteriorgram import BlockSet, Posteriorgram, row_max_span


class Method(enum.Enum):
    """Relevance estimator selector; values double as CLI/index identifiers."""

    ONE_BEST = "onebest"
    BLOCK_SUM = "sum"
    FRAME_MAX = "max"
    NAIVE_BAYES = "nb"
    EXACT = "exact"


@dataclass(frozen=True)
class RelevanceScore:
    word: str
    region_id: str
    score: float
    method: Method
    best_span: tuple[int, int] | None = None


@dataclass(frozen=True)
class DecisionThresholds:
    """Loss matrix for the yes/no spotting decision; tau is the derived cutoff."""

    loss_nn: float = 0.0
    loss_ny: float = 1.0
    loss_yn: float = 1.0
    loss_yy: float = 0.0

    @property
    def tau(self) -> float:
        denominator = self.loss_ny - self.loss_yy + self.loss_yn - self.loss_nn
        if denominator == 0:
            raise ValueError("degenerate loss matrix: threshold undefined")
        value = (self.loss_yn - self.loss_nn) / denominator
        if not math.isfinite(value):
            raise ValueError(f"loss matrix yields non-finite threshold {value}")
        return value


def relevance_one_best(g: WordGraph, word: str) -> RelevanceScore:
    """1.0 iff the word occurs on the single best transcription path."""
    present = any(e.word == word for e in one_best_path(g))
    return RelevanceScore(word=word, region_id=g.region_id,
                          score=1.0 if present else 0.0, method=Method.ONE_BEST)


def relevance_frame_max(pg: Posteriorgram, word: str) -> RelevanceScore:
    """Peak of the word's posteriorgram row; the spotted span comes for free."""
    score, span = row_max_span(pg, word)
    return RelevanceScore(word=word, region_id=pg.region_id,
                          score=score, method=Method.FRAME_MAX, best_span=span)


def relevance_block_sum(bs: BlockSet, region_id: str) -> RelevanceScore:
    """Sum of block peaks.  Improper on purpose: may exceed 1 when a word
    plausibly occurs in several blocks; kept unclamped for comparison."""
    return RelevanceScore(word=bs.word, region_id=region_id,
                          score=sum(bs.peak_values()), method=Method.BLOCK_SUM)


def naive_bayes_combine(peaks: list[float]) -> float:
    """q(k) = p_k + q(k-1) * (1 - p_k); equals 1 - prod(1 - p_k)."""
    q = 0.0
    for p in peaks:
        q = p + q * (1.0 - p)
    return q


def relevance_naive_bayes(bs: BlockSet, region_id: str) -> RelevanceScore:
    """Block peaks combined under independence of block occurrences."""
    return RelevanceScore(word=bs.word, region_id=region_id,
                          score=naive_bayes_combine(bs.peak_values()),
                          method=Method.NAIVE_BAYES)


def relevance_exact(g: WordGraph, word: str) -> RelevanceScore:
    """Exact probability that some transcription path contains the word.

    Computed by complement: 1 minus the mass of paths surviving after all
    edges labeled with the word are removed.
    """
    if not g.normalized:
        raise ValueError(f"lattice {g.region_id} must be normalized first")
    if word not in g.vocabulary:
        return RelevanceScore(word=word, region_id=g.region_id, score=0.0, method=Method.EXACT)

    n_nodes, esrc, edst, escore, by_dst, _ = g.topo_arrays()
    keep = np.fromiter((e.word != word for e in g.edges), dtype=bool, count=len(g.edges))
    if not keep.any():
        return RelevanceScore(word=word, region_id=g.region_id, score=1.0, method=Method.EXACT)

    sub_by_dst = by_dst[keep[by_dst]]
    log_without = _backend.forward_only(n_nodes, esrc, edst, escore * g.gamma, sub_by_dst)
    if log_without == float("-inf"):
        score = 1.0
    else:
        score = 1.0 - math.exp(log_without - g.log_total)
    return RelevanceScore(word=word, region_id=g.region_id,
                          score=min(1.0, max(0.0, score)), method=Method.EXACT)


def relevance_oracle(g: WordGraph, word: str, cap: int = 100_000) -> RelevanceScore:
    """Brute-force reference: total probability of enumerated paths containing
    the word.  Only viable on small lattices; raises past `cap` paths."""
    mass = sum(p for words, p in enumerate_paths(g, cap) if word in words)
    return RelevanceScore(word=word, region_id=g.region_id, score=mass, method=Method.EXACT)


def decide(score: RelevanceScore, thresholds: DecisionThresholds) -> bool:
    """Answer yes iff the relevance score strictly exceeds the loss threshold."""
    return score.score > thresholds.tau
