# Licensed under AGPL v3 or later

"""
Graph classification datasets in the TU text format.

``DS_A.txt`` lists directed node pairs ``i, j`` with 1-based global node
ids; ``DS_graph_indicator.txt`` maps every node (line) to its 1-based graph;
``DS_graph_labels.txt`` holds one label per graph.  Node labels and node
attributes are optional.
"""

import glob
import os

import numpy as np
import pandas as pd

from motif_pool.datasets.base import LabeledGraphSet
from motif_pool.graph import build_graph
from motif_pool.shared.errors import DataError

_SUFFIX_ADJACENCY = '_A.txt'
_SUFFIX_INDICATOR = '_graph_indicator.txt'
_SUFFIX_GRAPH_LABELS = '_graph_labels.txt'
_SUFFIX_NODE_LABELS = '_node_labels.txt'
_SUFFIX_NODE_ATTRIBUTES = '_node_attributes.txt'


def _detect_name(directory):
    candidates = sorted(glob.glob(os.path.join(directory, '*' + _SUFFIX_ADJACENCY)))
    if len(candidates) != 1:
        raise DataError('Expected exactly one file "*%s" in %s, found %d'
                        % (_SUFFIX_ADJACENCY, directory, len(candidates)))
    return os.path.basename(candidates[0])[:-len(_SUFFIX_ADJACENCY)]


def _read_table(path, what, dtype):
    if not os.path.exists(path):
        raise DataError('Missing %s file %s' % (what, path))
    try:
        frame = pd.read_csv(path, header=None, sep=r'\s*,\s*', engine='python',
                            skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        return np.zeros((0, 0), dtype=dtype)
    except (ValueError, pd.errors.ParserError) as e:
        raise DataError('Cannot parse %s file %s: %s' % (what, path, e))
    try:
        return frame.to_numpy(dtype=dtype)
    except (ValueError, TypeError):
        raise DataError('Non-numeric entries in %s file %s' % (what, path))


def load_tu_dataset(directory, name=None, seed=0):
    name = name or _detect_name(directory)
    prefix = os.path.join(directory, name)

    pairs = _read_table(prefix + _SUFFIX_ADJACENCY, 'adjacency', np.int64)
    indicator = _read_table(prefix + _SUFFIX_INDICATOR, 'graph indicator', np.int64).ravel()
    graph_labels = _read_table(prefix + _SUFFIX_GRAPH_LABELS, 'graph label', np.int64).ravel()

    num_nodes = indicator.size
    num_graphs = graph_labels.size
    if num_nodes == 0 or num_graphs == 0:
        raise DataError('Dataset %s contains no nodes or no graphs' % name)
    if indicator.min() < 1:
        raise DataError('Graph indicator references graph %d; graph ids start at 1'
                        % indicator.min())
    if indicator.max() > num_graphs:
        raise DataError('Graph indicator references graph %d, but only %d graph labels exist'
                        % (indicator.max(), num_graphs))
    if np.any(np.diff(indicator) < 0):
        raise DataError('Graph indicator is not sorted by graph')
    sizes = np.bincount(indicator - 1, minlength=num_graphs)
    if not sizes.all():
        raise DataError('Graph %d has no nodes' % (int(np.argmin(sizes)) + 1))
    offsets = np.concatenate([[0], np.cumsum(sizes)])

    if pairs.size and (pairs.shape[1] != 2 or pairs.min() < 1 or pairs.max() > num_nodes):
        raise DataError('Adjacency file of %s references nodes outside 1..%d' % (name, num_nodes))
    pairs = pairs.reshape(-1, 2) - 1

    features = _node_features(prefix, num_nodes)

    # Pairs are usually listed in both directions
    edges_by_graph = [set() for _ in range(num_graphs)]
    for i, j in pairs:
        g_i, g_j = indicator[i] - 1, indicator[j] - 1
        if g_i != g_j:
            raise DataError('Edge (%d, %d) connects graphs %d and %d' % (i + 1, j + 1, g_i + 1, g_j + 1))
        u, v = sorted((int(i - offsets[g_i]), int(j - offsets[g_i])))
        edges_by_graph[g_i].add((u, v))

    _classes, remapped = np.unique(graph_labels, return_inverse=True)
    graphs = []
    for k in range(num_graphs):
        graphs.append(build_graph(sorted(edges_by_graph[k]), int(sizes[k]),
                                  features[offsets[k]:offsets[k + 1]],
                                  graph_label=int(remapped[k])))

    data = LabeledGraphSet(graphs, name=name)
    return data.resplit(seed)


def _node_features(prefix, num_nodes):
    """Attributes if present, else one-hot node labels, else a constant column."""
    attributes_path = prefix + _SUFFIX_NODE_ATTRIBUTES
    if os.path.exists(attributes_path):
        attributes = _read_table(attributes_path, 'node attribute', np.float64)
        if attributes.shape[0] != num_nodes:
            raise DataError('Expected %d node attribute rows, got %d'
                            % (num_nodes, attributes.shape[0]))
        return attributes

    node_labels_path = prefix + _SUFFIX_NODE_LABELS
    if os.path.exists(node_labels_path):
        node_labels = _read_table(node_labels_path, 'node label', np.int64)[:, 0]
        if node_labels.size != num_nodes:
            raise DataError('Expected %d node labels, got %d' % (num_nodes, node_labels.size))
        _values, index = np.unique(node_labels, return_inverse=True)
        return np.eye(_values.size)[index]

    return np.ones((num_nodes, 1))


def write_tu_dataset(data, directory, name):
    """Writes graphs, graph labels and node features (as attributes)."""
    prefix = os.path.join(directory, name)
    offset = 0
    with open(prefix + _SUFFIX_ADJACENCY, 'w') as adjacency_file, \
            open(prefix + _SUFFIX_INDICATOR, 'w') as indicator_file, \
            open(prefix + _SUFFIX_GRAPH_LABELS, 'w') as labels_file:
        for k, g in enumerate(data.graphs, 1):
            for i, j, _weight in g.edges():
                print('%d, %d' % (offset + i + 1, offset + j + 1), file=adjacency_file)
                print('%d, %d' % (offset + j + 1, offset + i + 1), file=adjacency_file)
            for _ in range(g.n):
                print(k, file=indicator_file)
            print(g.graph_label, file=labels_file)
            offset += g.n

    features = np.vstack([g.features for g in data.graphs])
    pd.DataFrame(features).to_csv(prefix + _SUFFIX_NODE_ATTRIBUTES, header=False, index=False,
                                  float_format='%.17g')
