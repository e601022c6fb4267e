# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot loops shared by lattice normalization and posteriorgram scans.

Mirrors kwspot._kernels_py exactly; both backends must stay in lockstep so
that indices built with either are interchangeable.
"""

from libc.math cimport exp, log1p

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double NEG_INF = -np.inf


cdef inline double logaddexp(double a, double b) noexcept nogil:
    cdef double t
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    if a < b:
        t = a
        a = b
        b = t
    return a + log1p(exp(b - a))


def forward_backward(int n_nodes,
                     cnp.int64_t[::1] esrc,
                     cnp.int64_t[::1] edst,
                     cnp.float64_t[::1] ew,
                     cnp.int64_t[::1] by_dst,
                     cnp.int64_t[::1] by_src_desc):
    """Log-space path-mass accumulation over a topologically indexed DAG.

    Nodes must be numbered 0..n_nodes-1 in topological order with 0 the source
    and n_nodes-1 the sink.  `by_dst` lists edge indices ordered by ascending
    destination node, `by_src_desc` by descending source node.  Returns
    (alpha, beta): log forward mass into each node / log backward mass out.
    """
    alpha_arr = np.full(n_nodes, NEG_INF)
    beta_arr = np.full(n_nodes, NEG_INF)
    cdef cnp.float64_t[::1] alpha = alpha_arr
    cdef cnp.float64_t[::1] beta = beta_arr
    cdef Py_ssize_t k, e

    alpha[0] = 0.0
    for k in range(by_dst.shape[0]):
        e = by_dst[k]
        alpha[edst[e]] = logaddexp(alpha[edst[e]], alpha[esrc[e]] + ew[e])

    beta[n_nodes - 1] = 0.0
    for k in range(by_src_desc.shape[0]):
        e = by_src_desc[k]
        beta[esrc[e]] = logaddexp(beta[esrc[e]], ew[e] + beta[edst[e]])

    return alpha_arr, beta_arr


def forward_only(int n_nodes,
                 cnp.int64_t[::1] esrc,
                 cnp.int64_t[::1] edst,
                 cnp.float64_t[::1] ew,
                 cnp.int64_t[::1] by_dst):
    """Log forward mass reaching the sink (node n_nodes-1), skipping betas.

    `by_dst` may list only a subset of the edges (still ordered by ascending
    destination): the traversal is bounded by it, not by the edge arrays.
    """
    alpha_arr = np.full(n_nodes, NEG_INF)
    cdef cnp.float64_t[::1] alpha = alpha_arr
    cdef Py_ssize_t k, e

    alpha[0] = 0.0
    for k in range(by_dst.shape[0]):
        e = by_dst[k]
        alpha[edst[e]] = logaddexp(alpha[edst[e]], alpha[esrc[e]] + ew[e])
    return alpha[n_nodes - 1]


def segment_row(cnp.float64_t[::1] row, double drop):
    """Cut one posteriorgram row into peak blocks.

    Left-to-right scan tracking the maximum since the last cut; a drop of more
    than `drop` below that maximum commits a block ending (exclusive) at the
    current frame and restarts the scan there.  The trailing block is kept only
    if its maximum reaches `drop`.  Peak frame is the leftmost frame attaining
    the block maximum.  Returns (begins, ends, peaks) as int64 arrays.
    """
    cdef Py_ssize_t m = row.shape[0]
    cdef list begins = []
    cdef list ends = []
    cdef list peaks = []
    cdef Py_ssize_t i, begin, peak
    cdef double running_max

    if m == 0:
        return (np.zeros(0, dtype=np.int64),) * 3

    begin = 0
    peak = 0
    running_max = row[0]
    for i in range(1, m):
        if row[i] > running_max:
            running_max = row[i]
            peak = i
        elif row[i] < running_max - drop:
            begins.append(begin)
            ends.append(i)
            peaks.append(peak)
            begin = i
            peak = i
            running_max = row[i]
    if running_max >= drop:
        begins.append(begin)
        ends.append(m)
        peaks.append(peak)

    return (np.asarray(begins, dtype=np.int64),
            np.asarray(ends, dtype=np.int64),
            np.asarray(peaks, dtype=np.int64))


def max_run(cnp.float64_t[::1] row):
    """Row maximum and its leftmost maximal contiguous run.

    Returns (value, begin, end) with [begin, end) the first longest-possible
    run of frames all equal to the maximum.
    """
    cdef Py_ssize_t m = row.shape[0]
    cdef Py_ssize_t i, begin, end
    cdef double best

    if m == 0:
        return 0.0, 0, 0

    best = row[0]
    for i in range(1, m):
        if row[i] > best:
            best = row[i]

    begin = 0
    while row[begin] != best:
        begin += 1
    end = begin + 1
    while end < m and row[end] == best:
        end += 1
    return best, begin, end
