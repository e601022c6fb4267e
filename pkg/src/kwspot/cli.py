"""Command-line entry point: kws {index,search,eval,synth,serve}.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys

from kwspot.evaluation import evaluate, evaluate_one_best, read_qrels, read_queries, write_rp_csv
from kwspot.index import (
    IndexBuildError,
    IndexFormatError,
    build_index,
    load_index,
    save_index,
    stats,
)
from kwspot.lattice import LatticeError, NormalizationConfig
from kwspot.query import search
from kwspot.relevance import Method
from kwspot.synth import SynthConfig, generate


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="kws", description="Keyword spotting over word lattices")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build a spot index from a lattice directory")
    p.add_argument("-i", "--input", required=True, help="directory of lattice files")
    p.add_argument("-o", "--output", required=True, help="index file to write")
    p.add_argument("--method", choices=[m.value for m in Method], default="max")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--peak-threshold", type=float, default=0.05)
    p.add_argument("--prune", type=float, default=1e-4, help="minimum stored score")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true", help="machine-readable stats")

    p = sub.add_parser("search", help="query an index")
    p.add_argument("-x", "--index", required=True)
    p.add_argument("-q", "--query", required=True)
    p.add_argument("-t", "--tau", type=float, default=0.5)
    p.add_argument("--limit", type=int, default=100)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("eval", help="evaluate an index against qrels")
    p.add_argument("-x", "--index", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--curve", help="write the R-P curve CSV here")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("synth", help="generate a synthetic lattice collection")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lines", type=int, default=100)
    p.add_argument("--vocab", type=int, default=50)
    p.add_argument("--words-per-line", default="8:12", help="lo:hi inclusive range")
    p.add_argument("--confusion-rate", type=float, default=0.5)
    p.add_argument("--score-noise", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("serve", help="serve an index over HTTP")
    p.add_argument("-x", "--index", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7878)
    return parser


def _cmd_index(args) -> int:
    ix = build_index(
        args.input,
        method=Method(args.method),
        cfg=NormalizationConfig(args.gamma),
        peak_threshold=args.peak_threshold,
        prune_epsilon=args.prune,
        jobs=args.jobs,
    )
    for path, reason in ix.skipped or []:
        print(f"skipped {path}: {reason}", file=sys.stderr)
    save_index(ix, args.output)
    st = stats(ix)
    if args.json:
        print(json.dumps(st.as_dict()))
    else:
        print(f"indexed {st.regions} regions, {st.vocabulary_size} words, "
              f"{st.total_spots} spots ({st.spots_per_line:.2f} spots/line) -> {args.output}")
    return 0


def _cmd_search(args) -> int:
    ix = load_index(args.index)
    result = search(ix, args.query, tau=args.tau, limit=args.limit)
    if args.json:
        print(json.dumps({
            "query": result.query,
            "tau": result.tau,
            "out_of_lexicon": result.out_of_lexicon,
            "detected_count": result.detected_count,
            "results": [
                {"rank": h.rank, "region_id": h.region_id, "score": h.score,
                 "span": None if h.span is None else {"begin": h.span[0], "end": h.span[1]}}
                for h in result.hits
            ],
        }))
        return 0
    if result.out_of_lexicon:
        print(f"query {args.query!r} is not in the index lexicon", file=sys.stderr)
    for h in result.hits:
        begin, end = h.span if h.span is not None else ("-", "-")
        print(f"{h.rank}\t{h.region_id}\t{h.score:.6f}\t{begin}\t{end}")
    return 0


def _cmd_eval(args) -> int:
    ix = load_index(args.index)
    queries = read_queries(args.queries)
    qrels = read_qrels(args.qrels)
    if ix.method is Method.ONE_BEST:
        report = evaluate_one_best(ix, queries, qrels)
    else:
        report = evaluate(ix, queries, qrels)
    if args.curve:
        write_rp_csv(report.global_curve, args.curve)
    if args.json:
        print(json.dumps({
            "ap": report.ap,
            "ap_raw": report.global_curve.ap_raw,
            "map": report.map_value,
            "queries": report.query_count,
            "relevant_queries": report.relevant_query_count,
        }))
    else:
        print(f"AP={report.ap:.5f}")
        print(f"AP_raw={report.global_curve.ap_raw:.5f}")
        if report.map_value is not None:
            print(f"mAP={report.map_value:.5f}")
        else:
            print(f"mAP=undefined ({report.query_count - report.relevant_query_count} "
                  "queries have no relevant region)")
    return 0


def _cmd_synth(args) -> int:
    try:
        lo, hi = (int(part) for part in args.words_per_line.split(":"))
    except ValueError:
        raise UsageError(f"--words-per-line expects 'lo:hi', got {args.words_per_line!r}")
    cfg = SynthConfig(
        num_lines=args.lines,
        vocab_size=args.vocab,
        words_per_line=(lo, hi),
        confusion_rate=args.confusion_rate,
        score_noise=args.score_noise,
        seed=args.seed,
    )
    out = generate(cfg, args.output)
    print(f"wrote {cfg.num_lines} lattices to {out.lattice_dir}, "
          f"qrels to {out.qrels_path}, queries to {out.queries_path}")
    return 0


def _cmd_serve(args) -> int:
    from kwspot.service import serve  # deferred: not needed for batch commands

    serve(args.index, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1

    handlers = {
        "index": _cmd_index,
        "search": _cmd_search,
        "eval": _cmd_eval,
        "synth": _cmd_synth,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (LatticeError, IndexFormatError, IndexBuildError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
