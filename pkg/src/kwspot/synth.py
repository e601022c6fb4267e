"""Synthetic lattice collections with known transcripts, for tests and benchmarks.

Lines are sausage-shaped: one slot per true word, each slot holding the true
edge plus optional confusion edges.  Word frequencies follow a rank-frequency
(Zipf) law, so common words recur within a line.  Confusion hypotheses also
reappear with shifted segmentations (the word over a left sub-span plus a
filler word), mimicking the unstable boundaries of wrong recognizer
hypotheses; true-word boundaries stay stable.  All edges draw their log score
from the same jitter distribution, so with zero noise a slot's alternatives
tie exactly and normalize to uniform posteriors.  Everything is a pure
function of the seed.
"""

from __future__ import annotations

import bisect
import random
import string
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class SynthConfig:
    num_lines: int
    vocab_size: int
    words_per_line: tuple[int, int] = (8, 12)
    confusion_rate: float = 0.5
    score_noise: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.num_lines < 1 or self.vocab_size < 2:
            raise ValueError("need at least 1 line and 2 vocabulary words")
        lo, hi = self.words_per_line
        if not 1 <= lo <= hi:
            raise ValueError(f"bad words_per_line range {self.words_per_line}")
        if not 0.0 <= self.confusion_rate <= 1.0:
            raise ValueError(f"confusion_rate must be in [0, 1], got {self.confusion_rate}")
        if self.score_noise < 0.0:
            raise ValueError(f"score_noise must be >= 0, got {self.score_noise}")


@dataclass(frozen=True)
class SynthOutput:
    lattice_dir: Path
    qrels_path: Path
    queries_path: Path
    vocabulary: tuple[str, ...]


def make_vocabulary(size: int, seed: int) -> list[str]:
    """Deterministic list of distinct lowercase words, 3 to 7 letters."""
    rng = random.Random(f"{seed}:vocab")
    words: list[str] = []
    seen: set[str] = set()
    while len(words) < size:
        word = "".join(rng.choice(string.ascii_lowercase)
                       for _ in range(rng.randint(3, 7)))
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


class ZipfSampler:
    """Rank-frequency word sampler: P(rank k) proportional to 1/(k+1).

    Text is heavily skewed toward a few frequent words, which is what makes
    one word show up in several slots of the same line.
    """

    def __init__(self, vocabulary: list[str]):
        self._words = vocabulary
        cumulative = []
        total = 0.0
        for k in range(len(vocabulary)):
            total += 1.0 / (k + 1)
            cumulative.append(total)
        self._cumulative = cumulative
        self._total = total

    def draw(self, rng: random.Random) -> str:
        u = rng.random() * self._total
        return self._words[bisect.bisect_left(self._cumulative, u)]


def _edit1_neighbors(vocabulary: list[str]) -> dict[str, list[str]]:
    """In-vocabulary words one substitution/insertion/deletion away, per word."""
    vocab_set = set(vocabulary)
    neighbors: dict[str, list[str]] = {}
    for word in vocabulary:
        found: set[str] = set()
        for k in range(len(word)):
            found.add(word[:k] + word[k + 1:])
            for letter in string.ascii_lowercase:
                found.add(word[:k] + letter + word[k + 1:])
        for k in range(len(word) + 1):
            for letter in string.ascii_lowercase:
                found.add(word[:k] + letter + word[k:])
        found.discard(word)
        neighbors[word] = sorted(found & vocab_set)
    return neighbors


_SPLIT_RATE = 0.5  # chance a confusion also appears with a shifted segmentation


def _line_lattice(region: str, true_words: list[str], cfg: SynthConfig,
                  sampler: ZipfSampler, neighbors: dict[str, list[str]],
                  rng: random.Random) -> str:
    def jitter() -> float:
        return rng.gauss(0.0, cfg.score_noise) if cfg.score_noise > 0 else 0.0

    widths = [rng.randint(6, 14) for _ in true_words]
    boundaries = [0]
    for width in widths:
        boundaries.append(boundaries[-1] + width)

    # nodes: slot boundaries first, split-point nodes appended on demand
    node_frames = list(boundaries)
    edges: list[tuple[int, int, str, float]] = []  # (src, dst, word, score)
    for slot, true_word in enumerate(true_words):
        begin, end = slot, slot + 1
        edges.append((begin, end, true_word, jitter()))
        if rng.random() >= cfg.confusion_rate:
            continue
        slot_words = {true_word}
        for _ in range(rng.randint(1, 3)):
            pool = [w for w in neighbors[true_word] if w not in slot_words]
            if pool:
                confusion = rng.choice(pool)
            else:
                # rejection-sample the rank-frequency distribution,
                # bounded so tiny vocabularies cannot loop forever
                confusion = None
                for _ in range(20):
                    candidate = sampler.draw(rng)
                    if candidate not in slot_words:
                        confusion = candidate
                        break
                if confusion is None:
                    break
            slot_words.add(confusion)
            edges.append((begin, end, confusion, jitter()))
            if rng.random() < _SPLIT_RATE:
                # same wrong word again over a left sub-span, a filler word
                # closing the slot: one spurious occurrence, two blocks
                cut = boundaries[slot] + rng.randint(2, widths[slot] - 2)
                filler = sampler.draw(rng)
                while filler == true_word:
                    filler = sampler.draw(rng)
                mid = len(node_frames)
                node_frames.append(cut)
                edges.append((begin, mid, confusion, jitter()))
                edges.append((mid, end, filler, jitter()))

    lines = [f"LATTICE {region} {boundaries[-1]}"]
    lines.append(f"N {len(node_frames)}")
    lines.append(f"E {len(edges)}")
    for node, frame in enumerate(node_frames):
        lines.append(f"node {node} {frame}")
    for edge_id, (src, dst, word, score) in enumerate(edges):
        lines.append(f"edge {edge_id} {src} {dst} {word} {score!r}")
    return "\n".join(lines) + "\n"


def generate(cfg: SynthConfig, out_dir) -> SynthOutput:
    """Emit lattices, qrels, and the query list under `out_dir`.

    Layout: lattices/<region>.lat, qrels.tsv (word<TAB>region per true
    occurrence), queries.txt (the whole vocabulary).  Byte-identical for a
    fixed config; each line uses its own seed derived from (seed, line).
    """
    out = Path(out_dir)
    lattice_dir = out / "lattices"
    lattice_dir.mkdir(parents=True, exist_ok=True)

    vocabulary = make_vocabulary(cfg.vocab_size, cfg.seed)
    neighbors = _edit1_neighbors(vocabulary)
    sampler = ZipfSampler(vocabulary)
    lo, hi = cfg.words_per_line

    qrels_lines: list[str] = []
    for i in range(cfg.num_lines):
        region = f"line{i:06d}"
        rng = random.Random(f"{cfg.seed}:line:{i}")
        true_words = [sampler.draw(rng) for _ in range(rng.randint(lo, hi))]
        text = _line_lattice(region, true_words, cfg, sampler, neighbors, rng)
        (lattice_dir / f"{region}.lat").write_text(text, encoding="utf-8")
        for word in sorted(set(true_words)):
            qrels_lines.append(f"{word}\t{region}")

    qrels_path = out / "qrels.tsv"
    qrels_path.write_text("\n".join(qrels_lines) + "\n", encoding="utf-8")
    queries_path = out / "queries.txt"
    queries_path.write_text("\n".join(sorted(vocabulary)) + "\n", encoding="utf-8")
    return SynthOutput(lattice_dir=lattice_dir, qrels_path=qrels_path,
                       queries_path=queries_path, vocabulary=tuple(vocabulary))
