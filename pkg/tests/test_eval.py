"""Recall-precision evaluation: hand-derived fixtures and invariances."""

from __future__ import annotations

import random

import pytest

from kwspot.evaluation import (
    evaluate,
    evaluate_one_best,
    read_qrels,
    read_queries,
    write_rp_csv,
)
from kwspot.index import Posting, SpotIndex
from kwspot.relevance import Method


def make_index(entries: dict[str, list[tuple[str, float]]],
               method: Method = Method.FRAME_MAX) -> SpotIndex:
    regions = sorted({r for ps in entries.values() for r, _ in ps})
    return SpotIndex(
        method=method, gamma=1.0, peak_threshold=0.05, prune_epsilon=0.0,
        region_ids=regions,
        entries={w: [Posting(r, s, None) for r, s in ps] for w, ps in sorted(entries.items())},
    )


def test_hand_derived_ap():
    # ranked list [hit, miss, hit] with two relevant regions:
    # raw points (0.5, 1.0), (0.5, 0.5), (1.0, 2/3);
    # interpolated AP = 0.5 * 1.0 + 0.5 * 2/3 = 0.83333…
    ix = make_index({"q": [("r1", 0.9), ("r2", 0.8), ("r3", 0.7)]})
    report = evaluate(ix, ["q"], {"q": {"r1", "r3"}})
    curve = report.global_curve
    assert [(round(r, 6), round(p, 6)) for r, p, _ in curve.points] == [
        (0.5, 1.0), (0.5, 0.5), (1.0, round(2 / 3, 6))]
    assert curve.points[0][2] == pytest.approx(1.0)
    assert curve.points[1][2] == pytest.approx(1.0)   # same recall shares the max
    assert curve.points[2][2] == pytest.approx(2 / 3)
    assert curve.ap_interpolated == pytest.approx(0.83333, abs=1e-4)
    assert report.ap == curve.ap_interpolated
    assert report.map_value == pytest.approx(curve.ap_interpolated)  # single query


def test_perfect_ranking_gives_ap_one():
    ix = make_index({"q": [("r1", 0.9), ("r2", 0.8), ("r3", 0.2)]})
    report = evaluate(ix, ["q"], {"q": {"r1", "r2"}})
    assert report.ap == pytest.approx(1.0)
    assert report.global_curve.ap_raw == pytest.approx(1.0)


def test_query_without_relevant_region_suppresses_map():
    ix = make_index({"q": [("r1", 0.9)], "empty": [("r2", 0.5)]})
    report = evaluate(ix, ["q", "empty"], {"q": {"r1"}})
    assert report.map_value is None
    assert report.ap > 0.0
    assert report.per_query["empty"].relevant == 0
    assert report.per_query["empty"].ap_interpolated is None
    assert report.query_count == 2 and report.relevant_query_count == 1


def test_ap_undefined_when_nothing_relevant():
    ix = make_index({"q": [("r1", 0.9)]})
    with pytest.raises(ValueError, match="AP undefined"):
        evaluate(ix, ["q"], {})
    with pytest.raises(ValueError, match="no queries"):
        evaluate(ix, [], {})


def test_query_order_invariance():
    rng = random.Random(83)
    entries = {
        f"w{k}": [(f"r{j:02d}", round(rng.random(), 2)) for j in rng.sample(range(30), 8)]
        for k in range(6)
    }
    qrels = {f"w{k}": {f"r{j:02d}" for j in rng.sample(range(30), 4)} for k in range(6)}
    ix = make_index(entries)
    queries = list(entries)
    baseline = evaluate(ix, queries, qrels)
    for _ in range(5):
        rng.shuffle(queries)
        shuffled = evaluate(ix, queries, qrels)
        assert shuffled.ap == pytest.approx(baseline.ap, abs=1e-15)
        assert shuffled.global_curve.ap_raw == pytest.approx(
            baseline.global_curve.ap_raw, abs=1e-15)


def test_tied_scores_enter_together():
    # r1 relevant, r2 not, equal scores: both orderings give one sweep point
    forward = make_index({"q": [("r1", 0.5), ("r2", 0.5)]})
    backward = make_index({"q": [("r2", 0.5), ("r1", 0.5)]})
    qrels = {"q": {"r1"}}
    a = evaluate(forward, ["q"], qrels)
    b = evaluate(backward, ["q"], qrels)
    assert a.ap == b.ap
    assert len(a.global_curve.points) == 1
    assert a.global_curve.points[0] == (1.0, 0.5, 0.5)


def test_interpolated_recomputable_and_dominates_raw():
    rng = random.Random(89)
    entries = {"q": [(f"r{j:03d}", round(rng.random(), 3)) for j in range(60)]}
    qrels = {"q": {f"r{j:03d}" for j in rng.sample(range(60), 17)}}
    report = evaluate(make_index(entries), ["q"], qrels)
    points = report.global_curve.points
    for k, (recall, raw, interp) in enumerate(points):
        recomputed = max(p for r, p, _ in points if r >= recall)
        assert interp == recomputed
        assert interp >= raw
        if k:
            assert recall >= points[k - 1][0]
            assert interp <= points[k - 1][2]
    assert report.global_curve.ap_interpolated >= report.global_curve.ap_raw
    assert 0.0 <= report.global_curve.ap_raw <= 1.0
    assert 0.0 <= report.global_curve.ap_interpolated <= 1.0


def test_top_r_prefix_of_relevant_gives_per_query_ap_one():
    ix = make_index({"q": [("r1", 0.9), ("r2", 0.7), ("r3", 0.6), ("r4", 0.2)]})
    report = evaluate(ix, ["q"], {"q": {"r1", "r2", "r3"}})
    assert report.per_query["q"].ap_interpolated == pytest.approx(1.0)


def test_one_best_degenerate_ap():
    # h=2 hits, d=4 detected, r=5 relevant: precision 0.5, recall 0.4, AP 0.2
    ix = make_index({"q": [("r1", 1.0), ("r2", 1.0), ("r3", 1.0), ("r4", 1.0)]},
                    method=Method.ONE_BEST)
    qrels = {"q": {"r1", "r2", "r5", "r6", "r7"}}
    report = evaluate_one_best(ix, ["q"], qrels)
    assert report.ap == 0.2
    assert report.global_curve.points == [(0.4, 0.5, 0.5)]
    assert report.global_curve.ap_raw == 0.0  # single point has no raw area


def test_one_best_exact_match_gives_ap_one():
    ix = make_index({"q": [("r1", 1.0), ("r2", 1.0)]}, method=Method.ONE_BEST)
    report = evaluate_one_best(ix, ["q"], {"q": {"r1", "r2"}})
    assert report.ap == 1.0


def test_one_best_zero_hits():
    ix = make_index({"q": [("r1", 1.0)]}, method=Method.ONE_BEST)
    report = evaluate_one_best(ix, ["q"], {"q": {"r9"}})
    assert report.ap == 0.0


def test_one_best_requires_matching_method():
    ix = make_index({"q": [("r1", 1.0)]})
    with pytest.raises(ValueError, match="onebest"):
        evaluate_one_best(ix, ["q"], {"q": {"r1"}})


def test_sweep_agreement_between_general_and_degenerate():
    # a one-best index evaluated by the generic sweep lands on the same
    # single operating point and the same interpolated AP
    ix = make_index({"q": [("r1", 1.0), ("r2", 1.0), ("r3", 1.0), ("r4", 1.0)]},
                    method=Method.ONE_BEST)
    qrels = {"q": {"r1", "r2", "r5", "r6", "r7"}}
    degenerate = evaluate_one_best(ix, ["q"], qrels)
    generic = evaluate(ix, ["q"], qrels)
    assert generic.global_curve.points == degenerate.global_curve.points
    assert generic.ap == pytest.approx(degenerate.ap)


def test_rp_csv(tmp_path):
    ix = make_index({"q": [("r1", 0.9), ("r2", 0.8), ("r3", 0.7)]})
    report = evaluate(ix, ["q"], {"q": {"r1", "r3"}})
    out = tmp_path / "rp.csv"
    write_rp_csv(report.global_curve, out)
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "recall,precision_raw,precision_interpolated"
    assert len(lines) == 4
    assert lines[1] == "0.500000,1.000000,1.000000"
    assert lines[3] == "1.000000,0.666667,0.666667"

    empty = tmp_path / "empty.csv"
    write_rp_csv(type(report.global_curve)(points=[], ap_raw=0.0, ap_interpolated=0.0), empty)
    assert empty.read_text(encoding="utf-8").splitlines() == [
        "recall,precision_raw,precision_interpolated"]

    with pytest.raises(OSError):
        write_rp_csv(report.global_curve, tmp_path / "nodir" / "rp.csv")


def test_query_and_qrels_files(tmp_path):
    queries_path = tmp_path / "q.txt"
    queries_path.write_text("alpha\n\nbeta\n", encoding="utf-8")
    assert read_queries(queries_path) == ["alpha", "beta"]

    qrels_path = tmp_path / "qrels.tsv"
    qrels_path.write_text("alpha\tr1\nalpha\tr2\nbeta\tr1\n", encoding="utf-8")
    assert read_qrels(qrels_path) == {"alpha": {"r1", "r2"}, "beta": {"r1"}}

    bad = tmp_path / "bad.tsv"
    bad.write_text("alpha r1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 1"):
        read_qrels(bad)
