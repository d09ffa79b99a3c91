# Licensed under AGPL v3 or later

import networkx as nx
import numpy as np
import scipy.linalg

from motif_pool.datasets.base import from_networkx, standardized_columns
from motif_pool.graph import sym_normalize

KARATE_FEATURE_WIDTH = 10
_EIGENVECTOR_COLUMNS = KARATE_FEATURE_WIDTH - 4


def load_karate():
    """
    Zachary's karate club: 34 members, labelled by the club they joined.

    Features are degree, clustering coefficient, triangle count, core number
    and the leading non-trivial eigenvectors of the normalised Laplacian.
    """
    nx_graph = nx.karate_club_graph()
    n = nx_graph.number_of_nodes()
    g = from_networkx(nx_graph)

    labels = np.asarray([0 if nx_graph.nodes[i]['club'] == 'Mr. Hi' else 1 for i in range(n)],
                        dtype=np.int64)

    clustering = nx.clustering(nx_graph)
    triangles = nx.triangles(nx_graph)
    core = nx.core_number(nx_graph)
    statistics = np.column_stack([
        [nx_graph.degree(i) for i in range(n)],
        [clustering[i] for i in range(n)],
        [triangles[i] for i in range(n)],
        [core[i] for i in range(n)],
    ]).astype(np.float64)

    laplacian = np.eye(n) - sym_normalize(g).toarray()
    _values, vectors = scipy.linalg.eigh(laplacian, subset_by_index=[1, _EIGENVECTOR_COLUMNS])
    # Eigenvector signs are arbitrary; fix them so the features are reproducible
    signs = np.sign(vectors[np.argmax(np.abs(vectors), axis=0), np.arange(vectors.shape[1])])
    vectors = vectors * signs

    features = np.hstack([standardized_columns(statistics), standardized_columns(vectors)])
    return g.with_features(features).with_labels(node_labels=labels)
