# Licensed under AGPL v3 or later

"""
Spectral clustering on the edge graph (SC) and on the triangle motif graph (MSC).
"""

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from sklearn.cluster import KMeans

from motif_pool.graph import inverse_sqrt_or_zero
from motif_pool.motifs import triangle_adjacency
from motif_pool.shared.errors import DataError, NumericalError

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 100


class SpectralEmbedding(object):
    def __init__(self, vectors, eigenvalues):
        self.vectors = vectors
        self.eigenvalues = eigenvalues

    def row_normalized(self):
        norms = np.linalg.norm(self.vectors, axis=1, keepdims=True)
        return np.divide(self.vectors, norms, out=np.zeros_like(self.vectors), where=norms > 0)


def _require_cluster_count(n, k):
    if k < 2:
        raise ValueError('Spectral clustering needs at least 2 clusters, got %d' % k)
    if n < k:
        raise ValueError('Cannot split %d nodes into %d clusters' % (n, k))


def spectral_embedding(adjacency, k):
    """
    Eigenvectors of the ``k`` smallest eigenvalues of ``I - D^{-1/2} A D^{-1/2}``.
    """
    adjacency = sp.csr_matrix(adjacency, dtype=np.float64)
    n = adjacency.shape[0]
    r = sp.diags(inverse_sqrt_or_zero(np.asarray(adjacency.sum(axis=1)).ravel()))
    laplacian = np.eye(n) - (r @ adjacency @ r).toarray()
    try:
        eigenvalues, vectors = scipy.linalg.eigh(laplacian, subset_by_index=[0, k - 1])
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise NumericalError('Eigendecomposition failed: %s' % e)
    if not (np.isfinite(eigenvalues).all() and np.isfinite(vectors).all()):
        raise NumericalError('Eigendecomposition produced non-finite values')
    return SpectralEmbedding(vectors, eigenvalues)


def _kmeans(k, seed):
    return KMeans(n_clusters=k, init='k-means++', n_init=KMEANS_RESTARTS,
                  max_iter=KMEANS_MAX_ITER, random_state=seed)


def spectral_cluster(g, k, seed):
    _require_cluster_count(g.n, k)
    points = spectral_embedding(g.adjacency, k).row_normalized()
    return _kmeans(k, seed).fit_predict(points).astype(np.int64)


def motif_spectral_cluster(g, k, seed):
    """
    Spectral clustering on the count-weighted triangle adjacency.

    Nodes in no triangle get a zero embedding row and join the cluster whose
    centroid lies nearest to the origin.
    """
    _require_cluster_count(g.n, k)
    a_m = triangle_adjacency(g)
    if a_m.is_empty():
        raise DataError('A_M identically zero: graph has no triangles')

    points = spectral_embedding(a_m.a_m, k).row_normalized()
    isolated = a_m.d_m == 0
    points[isolated] = 0.0
    if np.count_nonzero(~isolated) < k:
        raise DataError('Only %d nodes lie on triangles, fewer than %d clusters'
                        % (np.count_nonzero(~isolated), k))

    kmeans = _kmeans(k, seed).fit(points[~isolated])
    labels = np.zeros(g.n, dtype=np.int64)
    labels[~isolated] = kmeans.labels_
    if isolated.any():
        labels[isolated] = kmeans.predict(points[isolated])
    return labels
