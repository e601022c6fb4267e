#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Times the three hot operations on synthetic workloads, then a whole-pipeline
pass (parse -> normalize -> posteriorgram -> frame-max scores) with each
backend forced in turn.

Usage: python benchmarks/bench_kernels.py [--lines 2000] [--out results.json]
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import tempfile
import time
from pathlib import Path

import numpy as np

from kwspot import _kernels_py

try:
    from kwspot import _kernels as _kernels_native
except ImportError:
    _kernels_native = None

from kwspot.index import score_lattice
from kwspot.lattice import load_lattice
from kwspot.relevance import Method
from kwspot.synth import SynthConfig, generate


def time_repeated(fn, repeats: int = 5) -> float:
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def kernel_workload(rng: random.Random, graphs: int = 400):
    """Pre-generated argument tuples for the per-graph kernels."""
    work = []
    for _ in range(graphs):
        n = rng.randint(8, 24)
        edges = []
        for dst in range(1, n):
            for _ in range(rng.randint(1, 4)):
                edges.append((rng.randrange(dst), dst))
        esrc = np.array([e[0] for e in edges], dtype=np.int64)
        edst = np.array([e[1] for e in edges], dtype=np.int64)
        ew = np.array([rng.uniform(-4, 1) for _ in edges])
        by_dst = np.argsort(edst, kind="stable").astype(np.int64)
        by_src_desc = np.argsort(-esrc, kind="stable").astype(np.int64)
        work.append((n, esrc, edst, ew, by_dst, by_src_desc))
    rows = [np.random.default_rng(k).random(rng.randint(40, 160)) for k in range(graphs)]
    return work, rows


def bench_kernels(impl, work, rows) -> dict[str, float]:
    def run_fb():
        for n, esrc, edst, ew, by_dst, by_src_desc in work:
            impl.forward_backward(n, esrc, edst, ew, by_dst, by_src_desc)

    def run_segment():
        for row in rows:
            impl.segment_row(row, 0.05)

    def run_max():
        for row in rows:
            impl.max_run(row)

    return {
        "forward_backward_s": time_repeated(run_fb),
        "segment_row_s": time_repeated(run_segment),
        "max_run_s": time_repeated(run_max),
    }


def bench_pipeline(lattice_dir: Path, limit: int) -> float:
    paths = sorted(lattice_dir.iterdir())[:limit]
    graphs = [load_lattice(p) for p in paths]

    def run():
        for g in graphs:
            score_lattice(g, Method.FRAME_MAX)

    return time_repeated(run, repeats=3)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lines", type=int, default=2000)
    parser.add_argument("--out", help="also write results as JSON")
    args = parser.parse_args()

    rng = random.Random(1234)
    work, rows = kernel_workload(rng)

    results: dict[str, dict] = {"pure": bench_kernels(_kernels_py, work, rows)}
    if _kernels_native is not None:
        results["native"] = bench_kernels(_kernels_native, work, rows)

    with tempfile.TemporaryDirectory() as tmp:
        out = generate(SynthConfig(num_lines=args.lines, vocab_size=300,
                                   confusion_rate=0.7, score_noise=0.5, seed=99), tmp)
        if _kernels_native is not None:
            _select_backend(_kernels_native)
            results["native"]["pipeline_s"] = bench_pipeline(out.lattice_dir, args.lines)
        _select_backend(_kernels_py)
        results["pure"]["pipeline_s"] = bench_pipeline(out.lattice_dir, args.lines)

    print(f"{'operation':<22}{'pure':>12}{'native':>12}{'speedup':>10}")
    keys = ["forward_backward_s", "segment_row_s", "max_run_s", "pipeline_s"]
    for key in keys:
        pure = results["pure"].get(key)
        native = results.get("native", {}).get(key)
        if pure is None:
            continue
        if native:
            print(f"{key:<22}{pure:>11.4f}s{native:>11.4f}s{pure / native:>9.1f}x")
        else:
            print(f"{key:<22}{pure:>11.4f}s{'-':>12}{'-':>10}")

    if args.out:
        Path(args.out).write_text(json.dumps(results, indent=2), encoding="utf-8")
    return 0


def _select_backend(impl) -> None:
    """Swap the active kernel set; the pipeline dispatches through _backend."""
    import kwspot._backend as backend

    backend.forward_backward = impl.forward_backward
    backend.forward_only = impl.forward_only
    backend.segment_row = impl.segment_row
    backend.max_run = impl.max_run


if __name__ == "__main__":
    raise SystemExit(main())
