"""Pure-Python fallback for the compiled kernels.

Keep in lockstep with _kernels.pyx: same operation order, same semantics, so
both backends produce identical numbers.
"""

from __future__ import annotations

import math

import numpy as np

_NEG_INF = float("-inf")


def _logaddexp(a: float, b: float) -> float:
    if a == _NEG_INF:
        return b
    if b == _NEG_INF:
        return a
    if a < b:
        a, b = b, a
    return a + math.log1p(math.exp(b - a))


def forward_backward(n_nodes, esrc, edst, ew, by_dst, by_src_desc):
    """Log-space path-mass accumulation over a topologically indexed DAG.

    See the compiled twin for the full contract.
    """
    alpha = [_NEG_INF] * n_nodes
    beta = [_NEG_INF] * n_nodes
    src = esrc.tolist()
    dst = edst.tolist()
    w = ew.tolist()

    alpha[0] = 0.0
    for e in by_dst.tolist():
        alpha[dst[e]] = _logaddexp(alpha[dst[e]], alpha[src[e]] + w[e])

    beta[n_nodes - 1] = 0.0
    for e in by_src_desc.tolist():
        beta[src[e]] = _logaddexp(beta[src[e]], w[e] + beta[dst[e]])

    return np.asarray(alpha), np.asarray(beta)


def forward_only(n_nodes, esrc, edst, ew, by_dst):
    """Log forward mass reaching the sink (node n_nodes-1), skipping betas."""
    alpha = [_NEG_INF] * n_nodes
    src = esrc.tolist()
    dst = edst.tolist()
    w = ew.tolist()

    alpha[0] = 0.0
    for e in by_dst.tolist():
        alpha[dst[e]] = _logaddexp(alpha[dst[e]], alpha[src[e]] + w[e])
    return alpha[n_nodes - 1]


def segment_row(row, drop):
    """Cut one posteriorgram row into peak blocks (see compiled twin)."""
    values = row.tolist() if isinstance(row, np.ndarray) else list(row)
    m = len(values)
    begins: list[int] = []
    ends: list[int] = []
    peaks: list[int] = []

    if m == 0:
        return (np.zeros(0, dtype=np.int64),) * 3

    begin = 0
    peak = 0
    running_max = values[0]
    for i in range(1, m):
        v = values[i]
        if v > running_max:
            running_max = v
            peak = i
        elif v < running_max - drop:
            begins.append(begin)
            ends.append(i)
            peaks.append(peak)
            begin = i
            peak = i
            running_max = v
    if running_max >= drop:
        begins.append(begin)
        ends.append(m)
        peaks.append(peak)

    return (np.asarray(begins, dtype=np.int64),
            np.asarray(ends, dtype=np.int64),
            np.asarray(peaks, dtype=np.int64))


def max_run(row):
    """Row maximum and its leftmost maximal contiguous run (value, begin, end)."""
    values = row.tolist() if isinstance(row, np.ndarray) else list(row)
    m = len(values)
    if m == 0:
        return 0.0, 0, 0

    best = max(values)
    begin = values.index(best)
    end = begin + 1
    while end < m and values[end] == best:
        end += 1
    return best, begin, end
