"""Compiled and pure-Python kernels must agree on every operation."""

from __future__ import annotations

import os
import random
import subprocess
import sys

import numpy as np
import pytest

from conftest import SAMPLE_TEXT
from kwspot import _backend, _kernels_py

native = pytest.importorskip("kwspot._kernels", reason="compiled kernels not built")


def random_dag_arrays(rng: random.Random):
    n = rng.randint(2, 12)
    edges = []
    for dst in range(1, n):
        for _ in range(rng.randint(1, 3)):
            edges.append((rng.randrange(dst), dst))
    esrc = np.array([e[0] for e in edges], dtype=np.int64)
    edst = np.array([e[1] for e in edges], dtype=np.int64)
    ew = np.array([rng.uniform(-4, 1) for _ in edges])
    by_dst = np.argsort(edst, kind="stable").astype(np.int64)
    by_src_desc = np.argsort(-esrc, kind="stable").astype(np.int64)
    return n, esrc, edst, ew, by_dst, by_src_desc


def test_forward_backward_agreement():
    rng = random.Random(101)
    for _ in range(50):
        n, esrc, edst, ew, by_dst, by_src_desc = random_dag_arrays(rng)
        a_native, b_native = native.forward_backward(n, esrc, edst, ew, by_dst, by_src_desc)
        a_pure, b_pure = _kernels_py.forward_backward(n, esrc, edst, ew, by_dst, by_src_desc)
        np.testing.assert_allclose(a_native, a_pure, atol=1e-12)
        np.testing.assert_allclose(b_native, b_pure, atol=1e-12)
        # forward and backward masses agree on the total
        assert a_native[-1] == pytest.approx(b_native[0], abs=1e-9)


def test_forward_only_subset_agreement():
    rng = random.Random(103)
    for _ in range(50):
        n, esrc, edst, ew, by_dst, _ = random_dag_arrays(rng)
        keep = np.array([rng.random() < 0.7 for _ in range(len(esrc))])
        sub = by_dst[keep[by_dst]]
        got_native = native.forward_only(n, esrc, edst, ew, sub)
        got_pure = _kernels_py.forward_only(n, esrc, edst, ew, sub)
        if got_pure == float("-inf"):
            assert got_native == float("-inf")
        else:
            assert got_native == pytest.approx(got_pure, abs=1e-12)


def test_segment_and_max_run_agreement():
    rng = random.Random(107)
    for _ in range(200):
        row = np.array([rng.random() for _ in range(rng.randint(1, 50))])
        drop = rng.uniform(0.01, 0.9)
        for part_native, part_pure in zip(native.segment_row(row, drop),
                                          _kernels_py.segment_row(row, drop)):
            np.testing.assert_array_equal(part_native, part_pure)
        assert native.max_run(row) == _kernels_py.max_run(row)


def test_backend_selection_flag():
    assert _backend.forward_backward in (native.forward_backward,
                                         _kernels_py.forward_backward)
    assert isinstance(_backend.NATIVE, bool)


def test_index_bytes_identical_across_backends(tmp_path):
    # the fallback is a drop-in: a whole index built pure must be
    # byte-identical to one built with the compiled kernels
    corpus = tmp_path / "lat"
    corpus.mkdir()
    (corpus / "r1.lat").write_text(SAMPLE_TEXT, encoding="utf-8")

    script = (
        "import sys, kwspot\n"
        "from kwspot.index import build_index, save_index\n"
        "from kwspot.relevance import Method\n"
        "assert kwspot.NATIVE == (sys.argv[3] == 'native'), kwspot.NATIVE\n"
        "save_index(build_index(sys.argv[1], Method.FRAME_MAX, prune_epsilon=0.0),\n"
        "           sys.argv[2])\n"
    )
    outputs = {}
    for mode, env_value in (("native", None), ("pure", "1")):
        env = dict(os.environ)
        env.pop("KWSPOT_PURE", None)
        if env_value:
            env["KWSPOT_PURE"] = env_value
        out = tmp_path / f"{mode}.bin"
        subprocess.run([sys.executable, "-c", script, str(corpus), str(out), mode],
                       check=True, env=env)
        outputs[mode] = out.read_bytes()
    assert outputs["native"] == outputs["pure"]
