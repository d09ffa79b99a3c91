# Licensed under AGPL v3 or later

"""
Plain-text edge lists: one ``i j [weight]`` per line, 0-based, ``#`` comments.

Sidecars: features as CSV without header (a row per node), labels as one
integer per line.
"""

import numpy as np
import pandas as pd

from motif_pool.graph import build_graph
from motif_pool.shared.errors import DataError


def _parse_edges(path):
    edges = []
    with open(path, 'r') as f:
        for line_number, line in enumerate(f, 1):
            content = line.split('#', 1)[0].strip()
            if not content:
                continue
            tokens = content.split()
            if len(tokens) not in (2, 3):
                raise DataError('%s:%d: expected "i j [weight]", got "%s"'
                                % (path, line_number, content))
            try:
                i, j = int(tokens[0]), int(tokens[1])
                weight = float(tokens[2]) if len(tokens) == 3 else 1.0
            except ValueError:
                raise DataError('%s:%d: malformed edge "%s"' % (path, line_number, content))
            edges.append((i, j, weight))
    return edges


def read_features(path):
    try:
        return pd.read_csv(path, header=None, dtype=np.float64).to_numpy()
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError('Cannot read features from %s: %s' % (path, e))


def read_labels(path):
    labels = []
    with open(path, 'r') as f:
        for line_number, line in enumerate(f, 1):
            content = line.strip()
            if not content:
                continue
            try:
                labels.append(int(content))
            except ValueError:
                raise DataError('%s:%d: expected an integer label, got "%s"'
                                % (path, line_number, content))
    return np.asarray(labels, dtype=np.int64)


def read_edge_list(path, n=None, features_path=None, labels_path=None):
    """
    The node count is ``n`` if given, else taken from a sidecar, else one
    past the largest node index in the file.
    """
    edges = _parse_edges(path)
    features = read_features(features_path) if features_path else None
    labels = read_labels(labels_path) if labels_path else None

    if n is None:
        if features is not None:
            n = features.shape[0]
        elif labels is not None:
            n = labels.size
        else:
            n = max([max(i, j) for i, j, _w in edges], default=-1) + 1
    return build_graph(edges, n, features, labels)


def write_edge_list(g, path, features_path=None, labels_path=None):
    with open(path, 'w') as f:
        print('# %d nodes, %d edges' % (g.n, g.num_edges), file=f)
        for i, j, weight in g.edges():
            if weight == 1.0:
                print('%d %d' % (i, j), file=f)
            else:
                print('%d %d %r' % (i, j, weight), file=f)

    if features_path and g.features is not None:
        pd.DataFrame(g.features).to_csv(features_path, header=False, index=False,
                                        float_format='%.17g')
    if labels_path and g.node_labels is not None:
        with open(labels_path, 'w') as f:
            for label in g.node_labels:
                print(int(label), file=f)
