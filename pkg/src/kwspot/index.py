"""Inverted spot index: build from a lattice collection, persist, load, stats.

The persisted form is a small self-describing binary container:

    header, little-endian, 64 bytes:
        magic            8s   b"KWSPIDX1"
        version          u32  (currently 1)
        method           u32  (Method ordinal: onebest=0, sum=1, max=2, nb=3, exact=4)
        region_count     u32
        word_count       u32
        total_spots      u64
        gamma            f64
        peak_threshold   f64
        prune_epsilon    f64
        payload_crc32    u32
        reserved         u32  (zero)
    payload:
        region table: region_count x (u32 byte length + UTF-8 bytes),
            lexicographic order; a region's ordinal is its table position
        posting lists, words in lexicographic byte order:
            u32 byte length + UTF-8 word bytes
            u32 posting count
            count x record (u32 region ordinal, f64 score, u32 span begin,
                            u32 span end); spanless records store 0xFFFFFFFF twice

Everything is sorted, so byte output is a pure function of the ingested
lattices regardless of traversal order.
"""

from __future__ import annotations

import struct
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from kwspot.lattice import (
    LatticeError,
    NormalizationConfig,
    load_lattice,
    normalize,
    one_best_path,
)
from kwspot.posteriorgram import build_posteriorgram, row_max_span, segment_blocks
from kwspot.relevance import Method, naive_bayes_combine, relevance_exact

_MAGIC = b"KWSPIDX1"
_VERSION = 1
_HEADER = struct.Struct("<8sIIIIQdddII")
_RECORD = struct.Struct("<IdII")
_U32 = struct.Struct("<I")
_NO_SPAN = 0xFFFFFFFF

_METHOD_IDS = {m: i for i, m in enumerate(Method)}
_METHODS_BY_ID = {i: m for m, i in _METHOD_IDS.items()}


class IndexFormatError(ValueError):
    """Base class for index file problems."""


class IndexVersionError(IndexFormatError):
    """File declares an unsupported format version."""


class IndexCorruptError(IndexFormatError):
    """File is truncated or fails its checksum."""


class IndexBuildError(ValueError):
    """No lattice in the input set could be indexed."""


@dataclass(frozen=True)
class Posting:
    region_id: str
    score: float
    span: tuple[int, int] | None


@dataclass
class SpotIndex:
    method: Method
    gamma: float
    peak_threshold: float
    prune_epsilon: float
    region_ids: list[str]                 # sorted
    entries: dict[str, list[Posting]]     # word -> postings, score desc / region asc
    skipped: list[tuple[str, str]] | None = None  # (path, reason) of unparseable inputs

    @property
    def region_count(self) -> int:
        return len(self.region_ids)

    @property
    def words(self) -> list[str]:
        return list(self.entries)

    @property
    def total_spots(self) -> int:
        return sum(len(p) for p in self.entries.values())


@dataclass(frozen=True)
class IndexStats:
    regions: int
    vocabulary_size: int
    total_spots: int
    spots_per_line: float

    def as_dict(self) -> dict:
        return {
            "regions": self.regions,
            "vocabulary_size": self.vocabulary_size,
            "total_spots": self.total_spots,
            "spots_per_line": self.spots_per_line,
        }


def score_lattice(path_or_graph, method: Method,
                  cfg: NormalizationConfig = NormalizationConfig(),
                  peak_threshold: float = 0.05) -> tuple[str, dict[str, tuple[float, tuple[int, int] | None]]]:
    """Score every vocabulary word of one lattice with the chosen estimator.

    Returns (region_id, {word: (score, span)}).
    """
    g = path_or_graph if not isinstance(path_or_graph, (str, Path)) else load_lattice(path_or_graph)
    g = normalize(g, cfg)
    scores: dict[str, tuple[float, tuple[int, int] | None]] = {}

    if method is Method.ONE_BEST:
        on_best = {e.word for e in one_best_path(g)}
        for word in g.vocabulary:
            scores[word] = (1.0 if word in on_best else 0.0, None)
        return g.region_id, scores

    if method is Method.EXACT:
        for word in g.vocabulary:
            scores[word] = (relevance_exact(g, word).score, None)
        return g.region_id, scores

    pg = build_posteriorgram(g)
    if method is Method.FRAME_MAX:
        for word in g.vocabulary:
            scores[word] = row_max_span(pg, word)
        return g.region_id, scores

    # BLOCK_SUM / NAIVE_BAYES share the block segmentation
    for word in g.vocabulary:
        bs = segment_blocks(pg, word, peak_threshold)
        peaks = bs.peak_values()
        if method is Method.BLOCK_SUM:
            value = sum(peaks)
        else:
            value = naive_bayes_combine(peaks)
        span = None
        if bs.blocks:
            top = max(bs.blocks, key=lambda b: b.peak_value)
            span = (top.begin, top.end)
        scores[word] = (value, span)
    return g.region_id, scores


def _score_file(args):
    path, method_value, gamma, peak_threshold = args
    try:
        region, scores = score_lattice(
            path, Method(method_value), NormalizationConfig(gamma), peak_threshold)
        return path, region, scores, None
    except (LatticeError, OSError, UnicodeDecodeError) as exc:
        return path, None, None, str(exc)


def build_index(lattices, method: Method = Method.FRAME_MAX,
                cfg: NormalizationConfig = NormalizationConfig(),
                peak_threshold: float = 0.05,
                prune_epsilon: float = 1e-4,
                jobs: int = 1) -> SpotIndex:
    """Index a lattice collection.

    `lattices` is a directory or an iterable of file paths.  Per-file parse
    failures are collected on the returned index's `skipped` list; the build
    fails only when nothing parses.  Output is deterministic: regions, words,
    and postings are fully sorted, independent of input order.
    """
    if not 0.0 <= prune_epsilon < 1.0:
        raise ValueError(f"prune_epsilon must be in [0, 1), got {prune_epsilon}")
    if isinstance(lattices, (str, Path)):
        root = Path(lattices)
        if not root.is_dir():
            raise IndexBuildError(f"{root} is not a directory")
        paths = sorted(str(p) for p in root.iterdir() if p.is_file())
    else:
        paths = [str(p) for p in lattices]
    if not paths:
        raise IndexBuildError("no lattice files found")

    tasks = [(p, method.value, cfg.gamma, peak_threshold) for p in paths]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_score_file, tasks, chunksize=32))
    else:
        results = [_score_file(t) for t in tasks]

    skipped: list[tuple[str, str]] = []
    per_region: dict[str, dict[str, tuple[float, tuple[int, int] | None]]] = {}
    for path, region, scores, error in results:
        if error is not None:
            skipped.append((path, error))
        elif region in per_region:
            skipped.append((path, f"duplicate region id {region!r}"))
        else:
            per_region[region] = scores
    if not per_region:
        detail = "; ".join(f"{p}: {e}" for p, e in skipped[:5])
        raise IndexBuildError(f"no lattice could be indexed ({detail})")

    raw: dict[str, list[Posting]] = {}
    for region in sorted(per_region):
        for word, (score, span) in per_region[region].items():
            if score > 0.0 and score >= prune_epsilon:
                raw.setdefault(word, []).append(Posting(region, score, span))

    entries = {
        word: sorted(raw[word], key=lambda p: (-p.score, p.region_id))
        for word in sorted(raw)
    }
    return SpotIndex(
        method=method,
        gamma=cfg.gamma,
        peak_threshold=peak_threshold,
        prune_epsilon=prune_epsilon,
        region_ids=sorted(per_region),
        entries=entries,
        skipped=skipped or None,
    )


def save_index(ix: SpotIndex, path) -> None:
    """Serialize to the binary container; output bytes are deterministic."""
    chunks: list[bytes] = []
    ordinals: dict[str, int] = {}
    for k, region in enumerate(sorted(ix.region_ids)):
        ordinals[region] = k
        raw = region.encode("utf-8")
        chunks.append(_U32.pack(len(raw)) + raw)

    for word in sorted(ix.entries, key=lambda w: w.encode("utf-8")):
        postings = ix.entries[word]
        raw = word.encode("utf-8")
        chunks.append(_U32.pack(len(raw)) + raw + _U32.pack(len(postings)))
        for p in postings:
            begin, end = p.span if p.span is not None else (_NO_SPAN, _NO_SPAN)
            chunks.append(_RECORD.pack(ordinals[p.region_id], p.score, begin, end))

    payload = b"".join(chunks)
    header = _HEADER.pack(
        _MAGIC, _VERSION, _METHOD_IDS[ix.method],
        ix.region_count, len(ix.entries), ix.total_spots,
        ix.gamma, ix.peak_threshold, ix.prune_epsilon,
        zlib.crc32(payload), 0,
    )
    with open(path, "wb") as handle:
        handle.write(header)
        handle.write(payload)


def load_index(path) -> SpotIndex:
    """Read a persisted index, verifying magic, version, and checksum."""
    with open(path, "rb") as handle:
        blob = handle.read()
    if len(blob) < _HEADER.size:
        raise IndexCorruptError(f"{path}: shorter than the {_HEADER.size}-byte header")
    (magic, version, method_id, region_count, word_count, total_spots,
     gamma, peak_threshold, prune_epsilon, crc, _reserved) = _HEADER.unpack_from(blob, 0)
    if magic != _MAGIC:
        raise IndexCorruptError(f"{path}: bad magic {magic!r}")
    if version != _VERSION:
        raise IndexVersionError(f"{path}: format version {version}, supported: {_VERSION}")
    payload = blob[_HEADER.size:]
    if zlib.crc32(payload) != crc:
        raise IndexCorruptError(f"{path}: checksum mismatch (truncated or damaged file)")
    if method_id not in _METHODS_BY_ID:
        raise IndexCorruptError(f"{path}: unknown method id {method_id}")

    offset = 0

    def take(n: int) -> bytes:
        nonlocal offset
        if offset + n > len(payload):
            raise IndexCorruptError(f"{path}: payload ends early at byte {offset}")
        piece = payload[offset:offset + n]
        offset += n
        return piece

    def take_u32() -> int:
        return _U32.unpack(take(4))[0]

    def take_str() -> str:
        return take(take_u32()).decode("utf-8")

    region_ids = [take_str() for _ in range(region_count)]
    entries: dict[str, list[Posting]] = {}
    spots = 0
    for _ in range(word_count):
        word = take_str()
        count = take_u32()
        postings = []
        for _ in range(count):
            ordinal, score, begin, end = _RECORD.unpack(take(_RECORD.size))
            if ordinal >= region_count:
                raise IndexCorruptError(f"{path}: region ordinal {ordinal} out of range")
            span = None if begin == _NO_SPAN else (begin, end)
            postings.append(Posting(region_ids[ordinal], score, span))
        entries[word] = postings
        spots += count
    if offset != len(payload):
        raise IndexCorruptError(f"{path}: {len(payload) - offset} trailing bytes")
    if spots != total_spots:
        raise IndexCorruptError(f"{path}: header claims {total_spots} spots, found {spots}")

    return SpotIndex(
        method=_METHODS_BY_ID[method_id],
        gamma=gamma,
        peak_threshold=peak_threshold,
        prune_epsilon=prune_epsilon,
        region_ids=region_ids,
        entries=entries,
    )


def stats(ix: SpotIndex) -> IndexStats:
    """Spotting-density statistics; spots per line proxies index memory cost."""
    total = ix.total_spots
    regions = ix.region_count
    return IndexStats(
        regions=regions,
        vocabulary_size=len(ix.entries),
        total_spots=total,
        spots_per_line=total / regions if regions else 0.0,
    )
