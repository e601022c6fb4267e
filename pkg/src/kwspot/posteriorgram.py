"""Frame-level word posteriors for one line region, and their peak blocks.

Each row of the posteriorgram is the per-frame probability that the frame
lies inside a segment written as that word; rows are accumulated from the
edge posteriors of a normalized word graph.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from kwspot import _backend
from kwspot.lattice import WordGraph


@dataclass(frozen=True)
class Block:
    """One peak block: half-open frame interval around a significant maximum."""

    begin: int
    end: int
    peak: int
    peak_value: float


@dataclass
class BlockSet:
    word: str
    blocks: list[Block]

    def peak_values(self) -> list[float]:
        return [b.peak_value for b in self.blocks]


@dataclass
class Posteriorgram:
    region_id: str
    num_frames: int
    rows: dict[str, np.ndarray]

    def row(self, word: str) -> np.ndarray:
        """Dense per-frame probabilities for `word`; zeros if absent."""
        got = self.rows.get(word)
        if got is None:
            return np.zeros(self.num_frames)
        return got


def build_posteriorgram(g: WordGraph) -> Posteriorgram:
    """Accumulate edge posteriors into per-word frame rows.

    rows[v][i] is the summed posterior of all v-labeled edges whose span
    contains frame i; summing over v at any frame gives 1.
    """
    if not g.normalized:
        raise ValueError(f"lattice {g.region_id} must be normalized first")
    rows: dict[str, np.ndarray] = {}
    for e in g.edges:
        row = rows.get(e.word)
        if row is None:
            row = rows[e.word] = np.zeros(g.num_frames)
        begin, end = g.edge_span(e)
        row[begin:end] += e.posterior
    return Posteriorgram(region_id=g.region_id, num_frames=g.num_frames, rows=rows)


def segment_blocks(pg: Posteriorgram, word: str, peak_threshold: float = 0.05) -> BlockSet:
    """Cut a word's row into blocks around significant local maxima.

    Scans left to right tracking the running maximum since the last cut; once
    the row drops more than `peak_threshold` below it, the block is committed
    (ending before the current frame) and the scan restarts.  Blocks whose
    peak stays under the threshold are discarded.
    """
    if not 0.0 < peak_threshold < 1.0:
        raise ValueError(f"peak_threshold must be in (0, 1), got {peak_threshold}")
    row = pg.rows.get(word)
    if row is None:
        return BlockSet(word=word, blocks=[])
    begins, ends, peaks = _backend.segment_row(row, peak_threshold)
    blocks = [
        Block(begin=int(b), end=int(e), peak=int(p), peak_value=float(row[p]))
        for b, e, p in zip(begins, ends, peaks)
        if row[p] >= peak_threshold
    ]
    return BlockSet(word=word, blocks=blocks)


def row_max_span(pg: Posteriorgram, word: str) -> tuple[float, tuple[int, int] | None]:
    """Row maximum and the leftmost maximal frame run attaining it.

    Returns (0.0, None) when the word never occurs in the region's lattice.
    """
    row = pg.rows.get(word)
    if row is None:
        return 0.0, None
    value, begin, end = _backend.max_run(row)
    return float(value), (int(begin), int(end))


def write_posteriorgram_csv(pg: Posteriorgram, path) -> None:
    """Debug dump for plotting: `frame,word,probability` rows, zeros omitted."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["frame", "word", "probability"])
        words = sorted(pg.rows)
        for frame in range(pg.num_frames):
            for word in words:
                value = pg.rows[word][frame]
                if value > 0.0:
                    writer.writerow([frame, word, f"{value:.6f}"])
