# Licensed under AGPL v3 or later

"""
Clustering quality metrics and collapse diagnostics.

NMI is normalised by the geometric mean of the two entropies,
``I(pred; truth) / sqrt(H(pred) H(truth))``.
"""

import math

import numpy as np
from sklearn.metrics import (
        completeness_score, homogeneity_score, normalized_mutual_info_score)

from motif_pool.autodiff import Tensor
from motif_pool.graph import degrees
from motif_pool.models import hard_labels
from motif_pool.motifs import MOTIF_TRIANGLE, motif_adjacency

_REPORT_FIELDS = (
    'nmi',
    'completeness',
    'homogeneity',
    'modularity',
    'conductance',
    'motif_conductance',
    'cluster_usage_entropy',
    'clusters_used_fraction',
)


def _labelings(pred, truth):
    pred = np.asarray(pred, dtype=np.int64).ravel()
    truth = np.asarray(truth, dtype=np.int64).ravel()
    if pred.size == 0 or truth.size == 0:
        raise ValueError('Cannot compare empty labelings')
    if pred.size != truth.size:
        raise ValueError('Labelings differ in length: %d vs %d' % (pred.size, truth.size))
    return pred, truth


def nmi(pred, truth):
    pred, truth = _labelings(pred, truth)
    return float(normalized_mutual_info_score(truth, pred, average_method='geometric'))


def completeness(pred, truth):
    pred, truth = _labelings(pred, truth)
    return float(completeness_score(truth, pred))


def homogeneity(pred, truth):
    pred, truth = _labelings(pred, truth)
    return float(homogeneity_score(truth, pred))


def _partition(g, partition):
    partition = np.asarray(partition, dtype=np.int64).ravel()
    if partition.shape != (g.n,):
        raise ValueError('Partition must cover all %d nodes, got %d entries'
                         % (g.n, partition.size))
    return partition


def modularity(g, partition):
    """Newman-Girvan modularity; 0 for a graph without edges."""
    partition = _partition(g, partition)
    two_m = float(g.adjacency.sum())
    if two_m == 0:
        return 0.0
    d = degrees(g)
    coo = g.adjacency.tocoo()
    same = partition[coo.row] == partition[coo.col]
    intra = float(coo.data[same].sum())
    volumes = np.bincount(partition, weights=d)
    return intra / two_m - float(np.sum((volumes / two_m) ** 2))


def _mean_cut_ratio(weights, partition):
    """
    Mean over clusters present in ``partition`` of
    ``Σ_{i∈k, j∉k} w_ij / Σ_{i∈k} Σ_j w_ij``; zero-volume clusters count as 0.
    """
    coo = weights.tocoo()
    crossing = partition[coo.row] != partition[coo.col]
    size = int(partition.max()) + 1
    cut = np.bincount(partition[coo.row[crossing]], weights=coo.data[crossing], minlength=size)
    row_sums = np.asarray(weights.sum(axis=1)).ravel()
    volume = np.bincount(partition, weights=row_sums, minlength=size)

    present = np.unique(partition)
    total = 0.0
    for k in present:
        if volume[k] > 0:
            total += cut[k] / volume[k]
    return total / present.size


def conductance(g, partition):
    partition = _partition(g, partition)
    if g.n == 0:
        return 0.0
    return _mean_cut_ratio(g.adjacency, partition)


def motif_conductance(g, partition, motif=MOTIF_TRIANGLE):
    """
    Mean motif conductance over clusters, from the sums
    ``cut = ½ Σ_{i∈k, j∉k} A_M`` and ``vol = ½ Σ_{i∈k} D_M``.
    """
    partition = _partition(g, partition)
    if g.n == 0:
        return 0.0
    return _mean_cut_ratio(motif_adjacency(g, motif).a_m, partition)


def degeneracy_report(s):
    """
    Returns ``(clusters_used_fraction, cluster_usage_entropy)`` of the argmax
    histogram of ``s``; the entropy is normalised by ``log K``.
    """
    labels = hard_labels(s)
    k = (s.data if isinstance(s, Tensor) else np.asarray(s)).shape[1]
    counts = np.bincount(labels, minlength=k)
    used_fraction = np.count_nonzero(counts) / float(k)
    if k < 2 or labels.size == 0:
        return used_fraction, 0.0
    p = counts[counts > 0] / float(labels.size)
    entropy = float(-(p * np.log(p)).sum() / math.log(k))
    return used_fraction, max(0.0, entropy)


class ClusteringReport(object):
    def __init__(self, nmi, completeness, homogeneity, modularity, conductance,
                 motif_conductance, cluster_usage_entropy, clusters_used_fraction):
        self.nmi = nmi
        self.completeness = completeness
        self.homogeneity = homogeneity
        self.modularity = modularity
        self.conductance = conductance
        self.motif_conductance = motif_conductance
        self.cluster_usage_entropy = cluster_usage_entropy
        self.clusters_used_fraction = clusters_used_fraction

    def to_dict(self):
        return dict((field, float(getattr(self, field))) for field in _REPORT_FIELDS)

    @classmethod
    def from_dict(clazz, values):
        return clazz(**dict((field, values[field]) for field in _REPORT_FIELDS))


def clustering_report(g, pred, truth, s=None, k=None):
    """
    Full report for hard labels ``pred``; without a soft assignment the usage
    diagnostics are taken from the one-hot encoding of ``pred``.
    """
    pred = _partition(g, pred)
    if s is None:
        k = k or int(pred.max()) + 1
        s = np.zeros((g.n, k))
        s[np.arange(g.n), pred] = 1.0
    used_fraction, usage_entropy = degeneracy_report(s)
    return ClusteringReport(
            nmi=nmi(pred, truth),
            completeness=completeness(pred, truth),
            homogeneity=homogeneity(pred, truth),
            modularity=modularity(g, pred),
            conductance=conductance(g, pred),
            motif_conductance=motif_conductance(g, pred),
            cluster_usage_entropy=usage_entropy,
            clusters_used_fraction=used_fraction,
            )
