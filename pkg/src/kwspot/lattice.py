"""Word-graph parsing, validation, and forward-backward edge posteriors.

A word graph is a DAG over frame positions of one text-line region: edges
carry word hypotheses with combined log scores, and every source-to-sink path
is one alternative transcription whose edge spans tile the region's frames.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from kwspot import _backend


class LatticeError(ValueError):
    """Base class for lattice input failures."""


class LatticeSyntaxError(LatticeError):
    """Malformed lattice text (bad header, field count, unparseable number)."""


class LatticeStructureError(LatticeError):
    """Well-formed text describing an invalid graph."""


class PathCapExceededError(LatticeError):
    """Path enumeration would exceed the caller's cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"lattice has {count} source-to-sink paths, more than cap {cap}")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Node:
    id: int
    frame: int


@dataclass(frozen=True)
class Edge:
    id: int
    src: int
    dst: int
    word: str
    log_score: float
    posterior: float | None = None


@dataclass(frozen=True)
class NormalizationConfig:
    """Posterior calibration scale applied to log scores before normalization."""

    gamma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be a finite positive real, got {self.gamma}")


@dataclass
class WordGraph:
    """One line region's word lattice.

    `nodes` is kept in topological order (sorted by frame, ties by id), with
    the single source first and the single sink last.  `gamma` and `log_total`
    are filled by normalize(); a normalized graph is treated as immutable.
    """

    region_id: str
    num_frames: int
    nodes: list[Node]
    edges: list[Edge]
    vocabulary: frozenset[str]
    gamma: float = 1.0
    log_total: float | None = None
    _arrays: tuple | None = field(default=None, repr=False, compare=False)
    _frames: dict[int, int] | None = field(default=None, repr=False, compare=False)

    @property
    def normalized(self) -> bool:
        return self.log_total is not None

    @property
    def frame_by_id(self) -> dict[int, int]:
        if self._frames is None:
            self._frames = {n.id: n.frame for n in self.nodes}
        return self._frames

    def edge_span(self, edge: Edge) -> tuple[int, int]:
        """Half-open frame interval covered by an edge."""
        frames = self.frame_by_id
        return frames[edge.src], frames[edge.dst]

    def topo_arrays(self):
        """Edge arrays in topological node numbering, cached after first use.

        Returns (n_nodes, esrc, edst, escore, by_dst, by_src_desc) where node
        k is self.nodes[k], escore is the raw (unscaled) log score.
        """
        if self._arrays is None:
            pos = {n.id: k for k, n in enumerate(self.nodes)}
            esrc = np.asarray([pos[e.src] for e in self.edges], dtype=np.int64)
            edst = np.asarray([pos[e.dst] for e in self.edges], dtype=np.int64)
            escore = np.asarray([e.log_score for e in self.edges], dtype=np.float64)
            by_dst = np.argsort(edst, kind="stable").astype(np.int64)
            by_src_desc = np.argsort(-esrc, kind="stable").astype(np.int64)
            self._arrays = (len(self.nodes), esrc, edst, escore, by_dst, by_src_desc)
        return self._arrays


def parse_lattice(source) -> WordGraph:
    """Parse and validate one lattice from bytes, text, or a file-like object.

    Format (UTF-8, '#' starts a comment line, blank lines ignored):
        LATTICE <region_id> <num_frames>
        N <node_count>
        E <edge_count>
        node <id> <frame>          (node_count lines)
        edge <id> <from> <to> <word> <log_score>   (edge_count lines)
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8", errors="strict")
    elif isinstance(source, str):
        text = source
    elif isinstance(source, io.TextIOBase):
        text = source.read()
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data

    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((lineno, stripped))

    if not lines:
        raise LatticeSyntaxError("missing header: expected 'LATTICE <region_id> <num_frames>'")

    def fail(lineno: int, reason: str):
        raise LatticeSyntaxError(f"line {lineno}: {reason}")

    lineno, header = lines[0]
    fields = header.split()
    if len(fields) != 3 or fields[0] != "LATTICE":
        fail(lineno, f"expected 'LATTICE <region_id> <num_frames>', got {header!r}")
    region_id = fields[1]
    try:
        num_frames = int(fields[2])
    except ValueError:
        fail(lineno, f"frame count {fields[2]!r} is not an integer")

    if len(lines) < 3:
        raise LatticeSyntaxError("truncated header: expected 'N <count>' and 'E <count>' lines")
    counts = {}
    for key, (lineno, line) in zip(("N", "E"), lines[1:3]):
        fields = line.split()
        if len(fields) != 2 or fields[0] != key:
            fail(lineno, f"expected '{key} <count>', got {line!r}")
        try:
            counts[key] = int(fields[1])
        except ValueError:
            fail(lineno, f"count {fields[1]!r} is not an integer")

    nodes: list[Node] = []
    edges: list[Edge] = []
    for lineno, line in lines[3:]:
        fields = line.split()
        if fields[0] == "node":
            if len(fields) != 3:
                fail(lineno, f"expected 'node <id> <frame>', got {line!r}")
            try:
                nodes.append(Node(id=int(fields[1]), frame=int(fields[2])))
            except ValueError:
                fail(lineno, f"non-integer node field in {line!r}")
        elif fields[0] == "edge":
            if len(fields) != 6:
                fail(lineno, f"expected 'edge <id> <from> <to> <word> <log_score>', got {line!r}")
            try:
                score = float(fields[5])
            except ValueError:
                fail(lineno, f"log score {fields[5]!r} is not a real number")
            if not math.isfinite(score):
                fail(lineno, f"log score {fields[5]!r} is not finite")
            try:
                edges.append(Edge(id=int(fields[1]), src=int(fields[2]), dst=int(fields[3]),
                                  word=fields[4], log_score=score))
            except ValueError:
                fail(lineno, f"non-integer edge field in {line!r}")
        else:
            fail(lineno, f"unrecognized line {line!r}")

    if len(nodes) != counts["N"]:
        raise LatticeSyntaxError(f"header declares {counts['N']} nodes, found {len(nodes)}")
    if len(edges) != counts["E"]:
        raise LatticeSyntaxError(f"header declares {counts['E']} edges, found {len(edges)}")

    return _validate(region_id, num_frames, nodes, edges)


def _validate(region_id: str, num_frames: int, nodes: list[Node], edges: list[Edge]) -> WordGraph:
    def fail(reason: str):
        raise LatticeStructureError(f"lattice {region_id}: {reason}")

    if num_frames < 1:
        fail(f"frame count must be >= 1, got {num_frames}")
    if not nodes:
        fail("no nodes")

    frames: dict[int, int] = {}
    for n in nodes:
        if n.id in frames:
            fail(f"duplicate node id {n.id}")
        if not 0 <= n.frame <= num_frames:
            fail(f"node {n.id} frame {n.frame} outside [0, {num_frames}]")
        frames[n.id] = n.frame

    seen_edges: set[int] = set()
    indeg: dict[int, int] = {n.id: 0 for n in nodes}
    outdeg: dict[int, int] = {n.id: 0 for n in nodes}
    for e in edges:
        if e.id in seen_edges:
            fail(f"duplicate edge id {e.id}")
        seen_edges.add(e.id)
        for endpoint in (e.src, e.dst):
            if endpoint not in frames:
                fail(f"edge {e.id} references unknown node {endpoint}")
        if frames[e.src] >= frames[e.dst]:
            fail(f"edge {e.id} span is non-increasing "
                 f"(frame {frames[e.src]} -> {frames[e.dst]})")
        outdeg[e.src] += 1
        indeg[e.dst] += 1

    sources = [n.id for n in nodes if indeg[n.id] == 0]
    sinks = [n.id for n in nodes if outdeg[n.id] == 0]
    if len(sources) != 1:
        fail(f"expected exactly one source node, found {sorted(sources)}")
    if len(sinks) != 1:
        fail(f"expected exactly one sink node, found {sorted(sinks)}")
    source, sink = sources[0], sinks[0]
    if frames[source] != 0:
        fail(f"source node {source} at frame {frames[source]}, must be 0 to tile [0, {num_frames})")
    if frames[sink] != num_frames:
        fail(f"sink node {sink} at frame {frames[sink]}, must equal frame count {num_frames}")

    succ: dict[int, list[int]] = {n.id: [] for n in nodes}
    pred: dict[int, list[int]] = {n.id: [] for n in nodes}
    for e in edges:
        succ[e.src].append(e.dst)
        pred[e.dst].append(e.src)

    def closure(start: int, adjacency: dict[int, list[int]]) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    from_source = closure(source, succ)
    to_sink = closure(sink, pred)
    for n in nodes:
        if n.id not in from_source or n.id not in to_sink:
            fail(f"node {n.id} lies on no source-to-sink path")

    ordered = sorted(nodes, key=lambda n: (n.frame, n.id))
    return WordGraph(
        region_id=region_id,
        num_frames=num_frames,
        nodes=ordered,
        edges=list(edges),
        vocabulary=frozenset(e.word for e in edges),
    )


def load_lattice(path) -> WordGraph:
    """Parse a lattice file from disk."""
    with open(path, "rb") as handle:
        return parse_lattice(handle)


def normalize(g: WordGraph, cfg: NormalizationConfig = NormalizationConfig()) -> WordGraph:
    """Fill edge posteriors by log-space forward-backward over gamma-scaled scores.

    posterior(e) = exp(alpha[src] + gamma*log_score + beta[dst] - log_total),
    the total probability mass of source-to-sink paths passing through e.
    """
    n_nodes, esrc, edst, escore, by_dst, by_src_desc = g.topo_arrays()
    scaled = escore * cfg.gamma
    alpha, beta = _backend.forward_backward(n_nodes, esrc, edst, scaled, by_dst, by_src_desc)
    log_total = float(alpha[n_nodes - 1])
    if not math.isfinite(log_total):
        raise LatticeError(f"lattice {g.region_id}: no finite path")

    log_post = alpha[esrc] + scaled + beta[edst] - log_total
    posteriors = np.minimum(np.exp(log_post), 1.0)

    edges = [replace(e, posterior=float(p)) for e, p in zip(g.edges, posteriors)]
    return WordGraph(
        region_id=g.region_id,
        num_frames=g.num_frames,
        nodes=g.nodes,
        edges=edges,
        vocabulary=g.vocabulary,
        gamma=cfg.gamma,
        log_total=log_total,
        _arrays=g._arrays,  # node numbering and raw scores are unchanged
    )


def one_best_path(g: WordGraph) -> list[Edge]:
    """Maximum-score source-to-sink path under the graph's gamma scaling.

    Exact score ties are broken toward the lexicographically smallest sequence
    of edge ids.
    """
    pos = {n.id: k for k, n in enumerate(g.nodes)}
    incoming: list[list[Edge]] = [[] for _ in g.nodes]
    for e in g.edges:
        incoming[pos[e.dst]].append(e)

    # best[k] = (score, edge-id tuple, edges) for the preferred path into node k
    best: list[tuple[float, tuple[int, ...], list[Edge]] | None] = [None] * len(g.nodes)
    best[0] = (0.0, (), [])
    for k in range(1, len(g.nodes)):
        for e in incoming[k]:
            prev = best[pos[e.src]]
            if prev is None:
                continue
            score = prev[0] + g.gamma * e.log_score
            ids = prev[1] + (e.id,)
            cur = best[k]
            if cur is None or score > cur[0] or (score == cur[0] and ids < cur[1]):
                best[k] = (score, ids, prev[2] + [e])
    final = best[-1]
    assert final is not None  # validated graphs always reach the sink
    return final[2]


def count_paths(g: WordGraph) -> int:
    """Number of distinct source-to-sink paths."""
    pos = {n.id: k for k, n in enumerate(g.nodes)}
    counts = [0] * len(g.nodes)
    counts[0] = 1
    incoming: list[list[int]] = [[] for _ in g.nodes]
    for e in g.edges:
        incoming[pos[e.dst]].append(pos[e.src])
    for k in range(1, len(g.nodes)):
        counts[k] = sum(counts[j] for j in incoming[k])
    return counts[-1]


def enumerate_paths(g: WordGraph, cap: int) -> list[tuple[tuple[str, ...], float]]:
    """All source-to-sink paths as (word sequence, normalized probability).

    One entry per path (distinct paths may repeat a word sequence); the
    probabilities sum to 1.  Raises PathCapExceededError when the path count
    exceeds `cap` before enumerating anything.
    """
    total = count_paths(g)
    if total > cap:
        raise PathCapExceededError(total, cap)

    if g.normalized:
        log_total = g.log_total
    else:
        n_nodes, esrc, edst, escore, by_dst, by_src_desc = g.topo_arrays()
        alpha, _ = _backend.forward_backward(n_nodes, esrc, edst, escore * g.gamma, by_dst, by_src_desc)
        log_total = float(alpha[n_nodes - 1])
    if log_total is None or not math.isfinite(log_total):
        raise LatticeError(f"lattice {g.region_id}: no finite path")

    pos = {n.id: k for k, n in enumerate(g.nodes)}
    outgoing: list[list[Edge]] = [[] for _ in g.nodes]
    for e in g.edges:
        outgoing[pos[e.src]].append(e)
    sink = len(g.nodes) - 1

    # explicit-stack DFS: long single-path lattices must not hit the
    # interpreter recursion limit
    results: list[tuple[tuple[str, ...], float]] = []
    words: list[str] = []
    log_w = [0.0]
    stack: list[tuple[int, int]] = [(0, 0)]  # (node, next outgoing edge index)
    while stack:
        k, next_edge = stack[-1]
        if k == sink:
            results.append((tuple(words), math.exp(log_w[-1] - log_total)))
        if k == sink or next_edge >= len(outgoing[k]):
            stack.pop()
            if words:
                words.pop()
                log_w.pop()
            continue
        stack[-1] = (k, next_edge + 1)
        e = outgoing[k][next_edge]
        words.append(e.word)
        log_w.append(log_w[-1] + g.gamma * e.log_score)
        stack.append((pos[e.dst], 0))
    return results
