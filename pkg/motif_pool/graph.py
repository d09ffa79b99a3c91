# Licensed under AGPL v3 or later

"""
Sparse undirected graphs.

Adjacency is held as a ``scipy.sparse.csr_matrix`` of 64-bit floats in
canonical form (sorted, unique column indices per row), symmetric and with
an empty diagonal.
"""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from motif_pool.shared.errors import DataError


class SparseGraph(object):
    def __init__(self, adjacency, features=None, node_labels=None, graph_label=None):
        adjacency = sp.csr_matrix(adjacency, dtype=np.float64, copy=True)
        adjacency.sum_duplicates()
        adjacency.eliminate_zeros()
        adjacency.sort_indices()

        n = adjacency.shape[0]
        if adjacency.shape != (n, n):
            raise DataError('Adjacency must be square, got shape %s' % (adjacency.shape,))
        if adjacency.diagonal().any():
            raise DataError('Adjacency must not contain self-loops')
        if (adjacency != adjacency.T).nnz:
            raise DataError('Adjacency must be symmetric')
        if adjacency.nnz and adjacency.data.min() < 0:
            raise DataError('Edge weights must be non-negative')

        if features is not None:
            features = np.asarray(features, dtype=np.float64)
            if features.ndim == 1:
                features = features.reshape(-1, 1)
            if features.shape[0] != n:
                raise DataError('Feature matrix has %d rows for %d nodes'
                                % (features.shape[0], n))

        if node_labels is not None:
            node_labels = np.asarray(node_labels, dtype=np.int64)
            if node_labels.shape != (n,):
                raise DataError('Expected %d node labels, got %d' % (n, node_labels.size))

        self._adjacency = adjacency
        self._features = features
        self._node_labels = node_labels
        self._graph_label = None if graph_label is None else int(graph_label)

    @property
    def n(self):
        return self._adjacency.shape[0]

    @property
    def adjacency(self):
        return self._adjacency

    @property
    def features(self):
        return self._features

    @property
    def node_labels(self):
        return self._node_labels

    @property
    def graph_label(self):
        return self._graph_label

    @property
    def num_edges(self):
        return self._adjacency.nnz // 2

    def total_weight(self):
        return float(self._adjacency.sum()) / 2.0

    def edges(self):
        """Yields each undirected edge once as ``(i, j, weight)`` with ``i < j``."""
        upper = sp.triu(self._adjacency, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        for k in order:
            yield int(upper.row[k]), int(upper.col[k]), float(upper.data[k])

    def binarized(self):
        """Adjacency with every present edge weighted 1."""
        binary = self._adjacency.copy()
        binary.data[:] = 1.0
        return binary

    def neighbors(self, i):
        start, stop = self._adjacency.indptr[i], self._adjacency.indptr[i + 1]
        return self._adjacency.indices[start:stop]

    def to_dense(self):
        return self._adjacency.toarray()

    def with_features(self, features):
        return SparseGraph(self._adjacency, features, self._node_labels, self._graph_label)

    def with_labels(self, node_labels=None, graph_label=None):
        return SparseGraph(self._adjacency, self._features,
                           self._node_labels if node_labels is None else node_labels,
                           self._graph_label if graph_label is None else graph_label)

    def __repr__(self):
        return 'SparseGraph(n=%d, edges=%d)' % (self.n, self.num_edges)


def build_graph(edge_list, n, features=None, node_labels=None, graph_label=None):
    """
    Builds a graph from ``(i, j)`` or ``(i, j, weight)`` tuples.

    Duplicate undirected edges collapse by summing their weights;
    self-loops are dropped.
    """
    if n < 0:
        raise DataError('Node count must be non-negative, got %d' % n)

    rows, cols, weights = [], [], []
    for edge in edge_list:
        if len(edge) == 2:
            i, j = edge
            weight = 1.0
        elif len(edge) == 3:
            i, j, weight = edge
        else:
            raise DataError('Malformed edge %r' % (edge,))

        i, j, weight = int(i), int(j), float(weight)
        if not (0 <= i < n and 0 <= j < n):
            raise DataError('Edge (%d, %d) has a node index out of range [0, %d)' % (i, j, n))
        if weight < 0:
            raise DataError('Edge (%d, %d) has negative weight %r' % (i, j, weight))
        if i == j:
            continue

        rows += [i, j]
        cols += [j, i]
        weights += [weight, weight]

    adjacency = sp.coo_matrix((weights, (rows, cols)), shape=(n, n), dtype=np.float64).tocsr()
    return SparseGraph(adjacency, features, node_labels, graph_label)


def from_dense(matrix, features=None, node_labels=None, graph_label=None):
    matrix = np.array(matrix, dtype=np.float64)
    np.fill_diagonal(matrix, 0.0)
    return SparseGraph(sp.csr_matrix(matrix), features, node_labels, graph_label)


def degrees(g):
    """Weighted degree vector ``A 1``."""
    return np.asarray(g.adjacency.sum(axis=1), dtype=np.float64).ravel()


def inverse_sqrt_or_zero(d):
    d = np.asarray(d, dtype=np.float64)
    result = np.zeros_like(d)
    positive = d > 0
    result[positive] = 1.0 / np.sqrt(d[positive])
    return result


def sym_normalize(g):
    """
    ``D^{-1/2} A D^{-1/2}`` in CSR form; rows and columns of isolated nodes stay zero.
    """
    r = sp.diags(inverse_sqrt_or_zero(degrees(g)))
    normalized = (r @ g.adjacency @ r).tocsr()
    normalized.sort_indices()
    return normalized


def connected_component_labels(g):
    _count, labels = connected_components(g.adjacency, directed=False)
    return labels


def disjoint_union(graphs):
    """Block-diagonal union; node ``i`` of graph ``k`` is shifted by the sizes before it."""
    graphs = list(graphs)
    adjacency = sp.block_diag([g.adjacency for g in graphs], format='csr')
    features = None
    if graphs and all(g.features is not None for g in graphs):
        features = np.vstack([g.features for g in graphs])
    return SparseGraph(adjacency, features)
