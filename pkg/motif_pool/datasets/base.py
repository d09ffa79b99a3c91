# Licensed under AGPL v3 or later

import networkx as nx
import numpy as np

from motif_pool.graph import SparseGraph
from motif_pool.shared.errors import DataError

SPLIT_RATIOS = (0.8, 0.1, 0.1)


def from_networkx(nx_graph, features=None, node_labels=None, graph_label=None):
    """Nodes must be the integers ``0 .. n-1``; edge weights are dropped."""
    n = nx_graph.number_of_nodes()
    adjacency = nx.to_scipy_sparse_array(nx_graph, nodelist=range(n), weight=None,
                                         dtype=np.float64, format='csr')
    return SparseGraph(adjacency, features, node_labels, graph_label)


def standardized_columns(matrix):
    """Zero-mean, unit-variance columns; constant columns become zero."""
    matrix = np.asarray(matrix, dtype=np.float64)
    std = matrix.std(axis=0)
    centered = matrix - matrix.mean(axis=0)
    return np.divide(centered, std, out=np.zeros_like(centered), where=std > 0)


def _largest_remainder(quotas, total, capacity):
    """Integer allocation of ``total`` following ``quotas``, never above ``capacity``."""
    counts = np.minimum(np.floor(quotas).astype(np.int64), capacity)
    order = np.argsort(-(quotas - np.floor(quotas)), kind='stable')
    while counts.sum() < total:
        progressed = False
        for c in order:
            if counts.sum() >= total:
                break
            if counts[c] < capacity[c]:
                counts[c] += 1
                progressed = True
        if not progressed:
            break
    return counts


def stratified_split(labels, seed, ratios=SPLIT_RATIOS):
    """
    Disjoint, exhaustive ``(train, val, test)`` index lists with every class
    represented in proportion; validation and test sizes are ``round(n * ratio)``.
    """
    labels = np.asarray(labels, dtype=np.int64)
    n = labels.size
    if len(ratios) != 3 or abs(sum(ratios) - 1.0) > 1e-9 or min(ratios) <= 0:
        raise ValueError('Split ratios must be three positive numbers summing to 1, got %r'
                         % (ratios,))
    n_val = int(round(n * ratios[1]))
    n_test = int(round(n * ratios[2]))
    if min(n - n_val - n_test, n_val, n_test) < 1:
        raise DataError('Cannot split %d graphs into non-empty train/validation/test sets' % n)

    classes, sizes = np.unique(labels, return_counts=True)
    val_counts = _largest_remainder(sizes * n_val / float(n), n_val, sizes)
    test_counts = _largest_remainder(sizes * n_test / float(n), n_test, sizes - val_counts)

    rng = np.random.default_rng(seed)
    train, val, test = [], [], []
    for label, n_v, n_t in zip(classes, val_counts, test_counts):
        members = np.flatnonzero(labels == label)
        rng.shuffle(members)
        val += members[:n_v].tolist()
        test += members[n_v:n_v + n_t].tolist()
        train += members[n_v + n_t:].tolist()
    return sorted(train), sorted(val), sorted(test)


class LabeledGraphSet(object):
    def __init__(self, graphs, split=None, name=None):
        graphs = list(graphs)
        if not graphs:
            raise DataError('A graph set needs at least one graph')
        for index, g in enumerate(graphs):
            if g.graph_label is None:
                raise DataError('Graph %d has no graph label' % index)
            if g.features is None:
                raise DataError('Graph %d has no features' % index)
        widths = set(g.features.shape[1] for g in graphs)
        if len(widths) != 1:
            raise DataError('Graphs disagree on feature width: %s' % sorted(widths))

        self.graphs = graphs
        self.name = name
        if split is None:
            split = stratified_split(self.labels(), seed=0)
        self._check_split(split)
        self.split = tuple(list(part) for part in split)

    def _check_split(self, split):
        if len(split) != 3:
            raise DataError('A split consists of train, validation and test indices')
        joined = sorted(i for part in split for i in part)
        if joined != list(range(len(self.graphs))):
            raise DataError('Split is not a disjoint, exhaustive partition of %d graphs'
                            % len(self.graphs))

    def __len__(self):
        return len(self.graphs)

    def labels(self):
        return np.array([g.graph_label for g in self.graphs], dtype=np.int64)

    @property
    def num_classes(self):
        return int(self.labels().max()) + 1

    @property
    def num_features(self):
        return self.graphs[0].features.shape[1]

    @property
    def max_nodes(self):
        return max(g.n for g in self.graphs)

    def resplit(self, seed):
        return LabeledGraphSet(self.graphs, stratified_split(self.labels(), seed), self.name)
