"""Shared fixtures: the reference lattice, builders, and a random-DAG generator."""

from __future__ import annotations

import math
import random

import pytest

from kwspot.lattice import WordGraph, count_paths, parse_lattice

# Reference two-path lattice: "the (cloud|clouds) is" over 30 frames, with
# path masses 0.6 / 0.4.  Scores are spelled with full float precision so the
# enumeration oracle and the literal values agree to ~1e-15.
SAMPLE_TEXT = f"""LATTICE r1 30
N 4
E 4
node 0 0
node 1 8
node 2 22
node 3 30
edge 0 0 1 the 0.0
edge 1 1 2 cloud {math.log(0.6)!r}
edge 2 1 2 clouds {math.log(0.4)!r}
edge 3 2 3 is 0.0
"""

# Same lattice with the rounded constants used in the file-format docs.
SAMPLE_TEXT_ROUNDED = """LATTICE r1 30
N 4
E 4
node 0 0
node 1 8
node 2 22
node 3 30
edge 0 0 1 the 0.0
edge 1 1 2 cloud -0.5108256
edge 2 1 2 clouds -0.9162907
edge 3 2 3 is 0.0
"""


def lattice_text(region: str, num_frames: int, nodes, edges) -> str:
    """Assemble lattice text from (id, frame) nodes and (id, src, dst, word, score) edges."""
    lines = [f"LATTICE {region} {num_frames}", f"N {len(nodes)}", f"E {len(edges)}"]
    lines += [f"node {i} {frame}" for i, frame in nodes]
    lines += [f"edge {i} {s} {d} {w} {score!r}" for i, s, d, w, score in edges]
    return "\n".join(lines) + "\n"


def single_path_text(words=("alpha", "beta", "gamma"), width: int = 10) -> str:
    nodes = [(k, k * width) for k in range(len(words) + 1)]
    edges = [(k, k, k + 1, w, -0.5 * k) for k, w in enumerate(words)]
    return lattice_text("single", width * len(words), nodes, edges)


def diamond_text() -> str:
    """Two independent binary choices: (aa|ab) then (ba|bb), 4 paths."""
    nodes = [(0, 0), (1, 10), (2, 20)]
    edges = [
        (0, 0, 1, "aa", math.log(0.7)),
        (1, 0, 1, "ab", math.log(0.3)),
        (2, 1, 2, "ba", math.log(0.2)),
        (3, 1, 2, "bb", math.log(0.8)),
    ]
    return lattice_text("diamond", 20, nodes, edges)


def random_lattice(rng: random.Random, max_nodes: int = 10, max_paths: int = 2000,
                   vocab=("a", "b", "c", "d", "e")) -> WordGraph:
    """Random valid DAG lattice: every node on a source-to-sink path, spans
    strictly increasing, at most `max_paths` paths.  Words repeat on purpose."""
    while True:
        n = rng.randint(3, max_nodes)
        num_frames = rng.randint(n, 4 * n)
        inner = sorted(rng.randint(1, num_frames - 1) for _ in range(n - 2))
        frames = [0] + inner + [num_frames]

        edges: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()

        def add(src: int, dst: int):
            if (src, dst) not in seen:
                seen.add((src, dst))
                edges.append((src, dst))

        for k in range(1, n):
            earlier = [j for j in range(n) if frames[j] < frames[k]]
            add(rng.choice(earlier), k)
        for k in range(n - 1):
            later = [j for j in range(n) if frames[j] > frames[k]]
            add(k, rng.choice(later))
        for _ in range(rng.randint(0, 2 * n)):
            src, dst = rng.sample(range(n), 2)
            if frames[src] > frames[dst]:
                src, dst = dst, src
            if frames[src] < frames[dst]:
                add(src, dst)

        nodes = [(k, frames[k]) for k in range(n)]
        edge_rows = [
            (i, src, dst, rng.choice(vocab), rng.uniform(-3.0, 1.0))
            for i, (src, dst) in enumerate(edges)
        ]
        g = parse_lattice(lattice_text("rnd", num_frames, nodes, edge_rows))
        if count_paths(g) <= max_paths:
            return g


@pytest.fixture
def sample_graph():
    return parse_lattice(SAMPLE_TEXT)


@pytest.fixture
def sample_lattice_dir(tmp_path):
    d = tmp_path / "lattices"
    d.mkdir()
    (d / "r1.lat").write_text(SAMPLE_TEXT, encoding="utf-8")
    return d
