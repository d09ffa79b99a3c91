# Licensed under AGPL v3 or later

"""
Coarsening of a graph by a soft cluster assignment, and the random baseline.
"""

import math

import numpy as np
import scipy.sparse as sp

from motif_pool.autodiff import (
        Tensor, elementwise_mul, matmul, sparse_dense_matmul,
        sym_normalize_dense, transpose)
from motif_pool.motifs import MOTIF_EDGE, MOTIF_TRIANGLE, MotifAdjacency
from motif_pool.shared.errors import ShapeError
from motif_pool.types.ratio import require_open_unit_interval

DEFAULT_MOTIF_THRESHOLD = 1e-6


class PooledGraph(object):
    """
    ``adj_raw`` is ``SᵀAS`` before self-loop removal; ``adj_pool`` is the
    loop-free, renormalised pooled adjacency that the next layer consumes.
    """
    def __init__(self, adj_pool, x_pool, s_used, adj_raw):
        self.adj_pool = adj_pool
        self.x_pool = x_pool
        self.s_used = s_used
        self.adj_raw = adj_raw

    @property
    def k(self):
        return self.adj_pool.shape[0]


def coarsen(adjacency, x, s):
    """
    ``A_pool = norm(offdiag(SᵀAS))`` and ``X_pool = SᵀX``.

    ``adjacency`` is either a constant (sparse or dense) matrix or a dense
    tensor already on the tape, as produced by a previous coarsening.
    """
    n = s.shape[0]
    if adjacency.shape != (n, n) or x.shape[0] != n:
        raise ShapeError('Cannot coarsen: adjacency %s, features %s, assignment %s'
                         % (adjacency.shape, x.shape, s.shape))
    tape = s.tape
    if isinstance(adjacency, Tensor):
        a_s = matmul(adjacency, s)
    else:
        a_s = sparse_dense_matmul(sp.csr_matrix(adjacency), s)

    s_t = transpose(s)
    adj_raw = matmul(s_t, a_s)
    k = s.shape[1]
    off_diagonal = tape.constant(np.ones((k, k)) - np.eye(k))
    adj_pool = sym_normalize_dense(elementwise_mul(adj_raw, off_diagonal))
    return PooledGraph(adj_pool, matmul(s_t, x), s, adj_raw)


def pooled_motif_adjacencies(adj_pool, threshold=DEFAULT_MOTIF_THRESHOLD):
    """
    Constant motif adjacencies of a pooled graph: the weighted pooled adjacency
    for the edge term and triangles of its support above ``threshold``.
    """
    values = adj_pool.data if isinstance(adj_pool, Tensor) else np.asarray(adj_pool)
    a_edge = MotifAdjacency(MOTIF_EDGE, values)
    support = sp.csr_matrix((values > threshold).astype(np.float64))
    a_tri = MotifAdjacency(MOTIF_TRIANGLE, (support @ support).multiply(support))
    return a_edge, a_tri


def random_assignment(n, k, seed):
    """One-hot ``S`` with every node placed in a uniformly random cluster."""
    if not 1 <= k <= n:
        raise ValueError('Expected 1 <= k <= n, got k=%d, n=%d' % (k, n))
    rng = np.random.default_rng(seed)
    s = np.zeros((n, k))
    s[np.arange(n), rng.integers(0, k, size=n)] = 1.0
    return s


def cluster_count(n, ratio):
    require_open_unit_interval(ratio, 'Pooling ratio')
    return max(1, int(math.floor(n * ratio)))
