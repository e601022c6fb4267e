"""Retrieval evaluation: recall, raw and interpolated precision, AP, mAP.

The global scheme pools every (query, region, score) triple and sweeps one
relevance threshold over the distinct scores; per-query curves use the same
sweep on each query's own postings.  Interpolated precision at recall r is
the best raw precision at any recall >= r, which removes the saw-tooth of the
raw curve and keeps single-point (0/1-scored) systems comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from kwspot.index import SpotIndex
from kwspot.relevance import Method

Qrels = dict[str, set[str]]


@dataclass
class RPCurve:
    """One point per distinct score threshold: (recall, raw precision,
    interpolated precision), recall nondecreasing."""

    points: list[tuple[float, float, float]]
    ap_raw: float
    ap_interpolated: float


@dataclass(frozen=True)
class QueryEval:
    relevant: int
    ap_raw: float | None
    ap_interpolated: float | None


@dataclass
class EvalReport:
    per_query: dict[str, QueryEval]
    global_curve: RPCurve
    map_value: float | None     # absent unless every evaluated query has r(q) > 0
    query_count: int
    relevant_query_count: int

    @property
    def ap(self) -> float:
        return self.global_curve.ap_interpolated


def read_queries(path) -> list[str]:
    """Query file: one word per line, blanks ignored."""
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word:
            words.append(word)
    return words


def read_qrels(path) -> Qrels:
    """Qrels file: TSV lines `word<TAB>region_id`."""
    qrels: Qrels = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"{path}: line {lineno}: expected 'word<TAB>region_id'")
        qrels.setdefault(parts[0], set()).add(parts[1])
    return qrels


def _sweep(triples: list[tuple[float, bool]], relevant_total: int) -> RPCurve:
    """Threshold sweep over distinct scores of (score, is_relevant) pairs.

    Ties enter the detected set together, so the curve is invariant to the
    ordering of equal-scored triples.  The AP integrals are step sums over
    distinct recall values: interpolated AP uses max precision at recall >= r,
    raw AP uses the raw precision where each recall is first attained.
    """
    triples = sorted(triples, key=lambda t: -t[0])

    # one point per distinct score
    recalls: list[float] = []
    raw: list[float] = []
    detected = 0
    hits = 0
    k = 0
    while k < len(triples):
        score = triples[k][0]
        while k < len(triples) and triples[k][0] == score:
            detected += 1
            hits += triples[k][1]
            k += 1
        recalls.append(hits / relevant_total)
        raw.append(hits / detected)

    # interpolated precision per point: best raw precision at recall >= this
    # point's recall; equal-recall points share one value
    n = len(recalls)
    suffix_max = [0.0] * n
    running = 0.0
    for j in range(n - 1, -1, -1):
        running = max(running, raw[j])
        suffix_max[j] = running
    interp = [0.0] * n
    j = 0
    while j < n:
        first = j
        while j < n and recalls[j] == recalls[first]:
            j += 1
        for i in range(first, j):
            interp[i] = suffix_max[first]

    ap_interp = 0.0
    ap_raw = 0.0
    prev_recall = 0.0
    for i in range(n):
        if i == 0 or recalls[i] != recalls[i - 1]:
            delta = recalls[i] - prev_recall
            ap_interp += delta * interp[i]
            ap_raw += delta * raw[i]
            prev_recall = recalls[i]

    return RPCurve(points=list(zip(recalls, raw, interp)),
                   ap_raw=ap_raw, ap_interpolated=ap_interp)


def evaluate(ix: SpotIndex, queries: list[str], qrels: Qrels) -> EvalReport:
    """Pooled global R-P curve and AP, plus per-query APs and mAP.

    Queries missing from the qrels count as having no relevant regions; the
    mAP is reported only when every evaluated query has at least one.  Raises
    when no query has any relevant region at all (AP undefined).
    """
    seen: set[str] = set()
    unique_queries = [q for q in queries if not (q in seen or seen.add(q))]
    if not unique_queries:
        raise ValueError("no queries to evaluate")

    pooled: list[tuple[float, bool]] = []
    per_query: dict[str, QueryEval] = {}
    relevant_total = 0
    ap_values: list[float] = []
    for q in unique_queries:
        relevant = qrels.get(q, set())
        relevant_total += len(relevant)
        own: list[tuple[float, bool]] = [
            (p.score, p.region_id in relevant) for p in ix.entries.get(q, [])
        ]
        pooled.extend(own)
        if relevant:
            curve = _sweep(own, len(relevant))
            per_query[q] = QueryEval(relevant=len(relevant),
                                     ap_raw=curve.ap_raw,
                                     ap_interpolated=curve.ap_interpolated)
            ap_values.append(curve.ap_interpolated)
        else:
            per_query[q] = QueryEval(relevant=0, ap_raw=None, ap_interpolated=None)

    if relevant_total == 0:
        raise ValueError("AP undefined: no (query, region) pair is relevant")

    global_curve = _sweep(pooled, relevant_total)
    all_relevant = len(ap_values) == len(unique_queries)
    return EvalReport(
        per_query=per_query,
        global_curve=global_curve,
        map_value=sum(ap_values) / len(ap_values) if all_relevant else None,
        query_count=len(unique_queries),
        relevant_query_count=len(ap_values),
    )


def evaluate_one_best(ix: SpotIndex, queries: list[str], qrels: Qrels) -> EvalReport:
    """Degenerate single-point evaluation for 1-best indices (scores all 1).

    The raw curve is the lone operating point (recall0, precision0), whose
    area is zero; interpolation extends it to the rectangle, giving
    AP = precision0 * recall0.  Per-query APs follow the same rule.
    """
    if ix.method is not Method.ONE_BEST:
        raise ValueError(f"index was built with {ix.method.value}, not onebest")
    seen: set[str] = set()
    unique_queries = [q for q in queries if not (q in seen or seen.add(q))]
    if not unique_queries:
        raise ValueError("no queries to evaluate")

    def single_point(detected: int, hit: int, relevant: int) -> RPCurve:
        precision0 = hit / detected if detected else 0.0
        recall0 = hit / relevant
        return RPCurve(points=[(recall0, precision0, precision0)],
                       ap_raw=0.0, ap_interpolated=precision0 * recall0)

    detected_total = 0
    hits_total = 0
    relevant_total = 0
    per_query: dict[str, QueryEval] = {}
    ap_values: list[float] = []
    for q in unique_queries:
        relevant = qrels.get(q, set())
        postings = ix.entries.get(q, [])
        detected = len(postings)
        hit = sum(p.region_id in relevant for p in postings)
        detected_total += detected
        hits_total += hit
        relevant_total += len(relevant)
        if relevant:
            curve = single_point(detected, hit, len(relevant))
            per_query[q] = QueryEval(relevant=len(relevant), ap_raw=0.0,
                                     ap_interpolated=curve.ap_interpolated)
            ap_values.append(curve.ap_interpolated)
        else:
            per_query[q] = QueryEval(relevant=0, ap_raw=None, ap_interpolated=None)

    if relevant_total == 0:
        raise ValueError("AP undefined: no (query, region) pair is relevant")

    all_relevant = len(ap_values) == len(unique_queries)
    return EvalReport(
        per_query=per_query,
        global_curve=single_point(detected_total, hits_total, relevant_total),
        map_value=sum(ap_values) / len(ap_values) if all_relevant else None,
        query_count=len(unique_queries),
        relevant_query_count=len(ap_values),
    )


def write_rp_csv(curve: RPCurve, path) -> None:
    """R-P curve as CSV: recall,precision_raw,precision_interpolated."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("recall,precision_raw,precision_interpolated\n")
        for recall, raw, interp in curve.points:
            handle.write(f"{recall:.6f},{raw:.6f},{interp:.6f}\n")
