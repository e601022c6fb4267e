"""kwspot: probabilistic keyword spotting over word lattices of text lines.

Pipeline: parse lattices -> normalize edge posteriors -> build posteriorgrams
-> score region relevance -> inverted spot index -> threshold-tunable search
and recall-precision evaluation.
"""

from kwspot._backend import NATIVE
from kwspot.evaluation import EvalReport, RPCurve, evaluate, evaluate_one_best
from kwspot.index import SpotIndex, build_index, load_index, save_index, stats
from kwspot.lattice import (
    Edge,
    Node,
    NormalizationConfig,
    WordGraph,
    enumerate_paths,
    load_lattice,
    normalize,
    one_best_path,
    parse_lattice,
)
from kwspot.posteriorgram import BlockSet, Posteriorgram, build_posteriorgram, segment_blocks
from kwspot.query import QueryResult, search, suggest
from kwspot.relevance import (
    DecisionThresholds,
    Method,
    RelevanceScore,
    decide,
    relevance_block_sum,
    relevance_exact,
    relevance_frame_max,
    relevance_naive_bayes,
    relevance_one_best,
    relevance_oracle,
)
from kwspot.synth import SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "NATIVE",
    "BlockSet",
    "DecisionThresholds",
    "Edge",
    "EvalReport",
    "Method",
    "Node",
    "NormalizationConfig",
    "Posteriorgram",
    "QueryResult",
    "RPCurve",
    "RelevanceScore",
    "SpotIndex",
    "SynthConfig",
    "WordGraph",
    "build_index",
    "build_posteriorgram",
    "decide",
    "enumerate_paths",
    "evaluate",
    "evaluate_one_best",
    "generate",
    "load_index",
    "load_lattice",
    "normalize",
    "one_best_path",
    "parse_lattice",
    "relevance_block_sum",
    "relevance_exact",
    "relevance_frame_max",
    "relevance_naive_bayes",
    "relevance_one_best",
    "relevance_oracle",
    "save_index",
    "search",
    "segment_blocks",
    "stats",
    "suggest",
]
