# Licensed under AGPL v3 or later

"""
Motif adjacency matrices and exact motif cut / volume quantities.

A motif instance is a distinct subgraph: an edge, a 3-clique, a 4-clique,
or a 4-cycle identified by its edge set (so K4 holds three 4-cycles).
Weighted graphs are binarised before counting.
"""

import itertools

import numpy as np
import scipy.sparse as sp

from motif_pool.shared.errors import DataError

MOTIF_EDGE = 'edge'
MOTIF_TRIANGLE = 'triangle'
MOTIF_FOUR_CYCLE = 'four-cycle'
MOTIF_K4 = 'k4'

MOTIFS = (MOTIF_EDGE, MOTIF_TRIANGLE, MOTIF_FOUR_CYCLE, MOTIF_K4)

MOTIF_SIZES = {
    MOTIF_EDGE: 2,
    MOTIF_TRIANGLE: 3,
    MOTIF_FOUR_CYCLE: 4,
    MOTIF_K4: 4,
}

ORACLE_MAX_NODES = 200


def _require_motif(motif, allowed=MOTIFS):
    if motif not in allowed:
        raise ValueError('Unsupported motif "%s", expected one of: %s'
                         % (motif, ', '.join(allowed)))


def _require_oracle_scale(g):
    if g.n > ORACLE_MAX_NODES:
        raise DataError('Brute-force motif enumeration is limited to %d nodes, graph has %d'
                        % (ORACLE_MAX_NODES, g.n))


class MotifAdjacency(object):
    def __init__(self, motif, a_m):
        _require_motif(motif)
        a_m = sp.csr_matrix(a_m, dtype=np.float64, copy=True)
        a_m = (a_m - sp.diags(a_m.diagonal())).tocsr()
        a_m.eliminate_zeros()
        a_m.sort_indices()
        self.motif = motif
        self.a_m = a_m
        self.d_m = np.asarray(a_m.sum(axis=1), dtype=np.float64).ravel()

    @property
    def n(self):
        return self.a_m.shape[0]

    def is_empty(self):
        return self.a_m.nnz == 0

    def density(self):
        n = self.n
        if n < 2:
            return 0.0
        return self.a_m.nnz / float(n * (n - 1))

    def laplacian(self):
        return (sp.diags(self.d_m) - self.a_m).tocsr()

    def __repr__(self):
        return 'MotifAdjacency(motif=%r, n=%d, nnz=%d)' % (self.motif, self.n, self.a_m.nnz)


class MotifPartitionStats(object):
    """
    ``cut_m`` counts instances spanning more than one cluster; ``cut_per_cluster[k]``
    counts instances with nodes both inside and outside cluster ``k``;
    ``vol_m[k]`` counts instance endpoints inside cluster ``k``.
    """
    def __init__(self, motif, num_instances, cut_m, cut_per_cluster, vol_m):
        self.motif = motif
        self.num_instances = num_instances
        self.cut_m = cut_m
        self.cut_per_cluster = cut_per_cluster
        self.vol_m = vol_m


def edge_adjacency(g):
    return MotifAdjacency(MOTIF_EDGE, g.binarized())


def triangle_adjacency(g):
    """``(A A) ⊙ A`` on the binarised adjacency: co-participation counts in triangles."""
    binary = g.binarized()
    return MotifAdjacency(MOTIF_TRIANGLE, (binary @ binary).multiply(binary))


def motif_adjacency(g, motif):
    _require_motif(motif)
    if motif == MOTIF_EDGE:
        return edge_adjacency(g)
    if motif == MOTIF_TRIANGLE:
        return triangle_adjacency(g)
    return motif_adjacency_bruteforce(g, motif)


def _neighbor_sets(g):
    return [set(int(j) for j in g.neighbors(i)) for i in range(g.n)]


def enumerate_instances(g, motif):
    """
    All instances of ``motif`` as node tuples, each instance exactly once,
    in a deterministic order.  4-cycles are returned in cycle order.
    """
    _require_motif(motif)
    neighbors = _neighbor_sets(g)
    n = g.n

    if motif == MOTIF_EDGE:
        return [(i, j) for i in range(n) for j in sorted(neighbors[i]) if j > i]

    triangles = []
    for i in range(n):
        for j in sorted(neighbors[i]):
            if j <= i:
                continue
            for k in sorted(neighbors[i] & neighbors[j]):
                if k > j:
                    triangles.append((i, j, k))

    if motif == MOTIF_TRIANGLE:
        return triangles

    if motif == MOTIF_K4:
        cliques = []
        for i, j, k in triangles:
            for l in sorted(neighbors[i] & neighbors[j] & neighbors[k]):
                if l > k:
                    cliques.append((i, j, k, l))
        return cliques

    # A 4-cycle a-b-c-d-a is found once per diagonal pair (a, c) and (b, d)
    cycles = {}
    for a in range(n):
        for c in range(a + 1, n):
            for b, d in itertools.combinations(sorted(neighbors[a] & neighbors[c]), 2):
                key = frozenset(frozenset(e) for e in ((a, b), (b, c), (c, d), (d, a)))
                cycles.setdefault(key, (a, b, c, d))
    return sorted(cycles.values())


def triangle_count(g):
    return int(round(triangle_adjacency(g).a_m.sum() / 6.0))


def node_triangle_counts(g):
    """Number of triangles each node belongs to."""
    return np.rint(triangle_adjacency(g).d_m / 2.0).astype(np.int64)


def _is_instance(adjacent, nodes, motif):
    if motif == MOTIF_TRIANGLE or motif == MOTIF_K4:
        return all(adjacent[u, v] for u, v in itertools.combinations(nodes, 2))
    return all(adjacent[nodes[t], nodes[(t + 1) % 4]] for t in range(4))


def motif_adjacency_bruteforce(g, motif):
    """
    Oracle: exhaustive enumeration over node tuples, no algebraic shortcuts.
    """
    _require_motif(motif, (MOTIF_TRIANGLE, MOTIF_FOUR_CYCLE, MOTIF_K4))
    _require_oracle_scale(g)

    adjacent = g.adjacency.toarray() > 0
    counts = np.zeros((g.n, g.n), dtype=np.int64)

    def credit(nodes):
        for u, v in itertools.combinations(nodes, 2):
            counts[u, v] += 1
            counts[v, u] += 1

    if motif == MOTIF_FOUR_CYCLE:
        for a, b, c, d in itertools.combinations(range(g.n), 4):
            # The three distinct cyclic orders of four nodes
            for cycle in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
                if _is_instance(adjacent, cycle, motif):
                    credit(cycle)
    else:
        for nodes in itertools.combinations(range(g.n), MOTIF_SIZES[motif]):
            if _is_instance(adjacent, nodes, motif):
                credit(nodes)

    return MotifAdjacency(motif, sp.csr_matrix(counts.astype(np.float64)))


def _as_partition(partition, n):
    partition = np.asarray(partition, dtype=np.int64)
    if partition.shape != (n,):
        raise ValueError('Partition must assign all %d nodes, got %d entries'
                         % (n, partition.size))
    if n and partition.min() < 0:
        raise ValueError('Cluster ids must be non-negative')
    return partition


def motif_cut_vol(g, motif, partition):
    _require_motif(motif)
    _require_oracle_scale(g)
    partition = _as_partition(partition, g.n)
    k = int(partition.max()) + 1 if g.n else 0

    cut_m = 0
    cut_per_cluster = np.zeros(k, dtype=np.int64)
    vol_m = np.zeros(k, dtype=np.int64)
    instances = enumerate_instances(g, motif)
    for nodes in instances:
        clusters = partition[list(nodes)]
        for c in clusters:
            vol_m[c] += 1
        present = np.unique(clusters)
        if present.size > 1:
            cut_m += 1
            cut_per_cluster[present] += 1

    return MotifPartitionStats(motif, len(instances), cut_m, cut_per_cluster, vol_m)


def _integer_matrix(matrix):
    return np.rint(matrix.toarray()).astype(np.int64)


def verify_triangle_identity(g, partition):
    """
    Checks ``cut_M(S_k) = ½ Σ_{i∈S_k, j∉S_k} (A_M)_ij`` and
    ``vol_M(S_k) = ½ Σ_{i∈S_k} (D_M)_ii`` for every cluster, in integers.
    """
    partition = _as_partition(partition, g.n)
    stats = motif_cut_vol(g, MOTIF_TRIANGLE, partition)
    a_m = _integer_matrix(triangle_adjacency(g).a_m)
    d_m = a_m.sum(axis=1)

    for k in range(stats.vol_m.size):
        inside = partition == k
        crossing = a_m[np.ix_(inside, ~inside)].sum()
        if 2 * stats.cut_per_cluster[k] != crossing:
            return False
        if 2 * stats.vol_m[k] != d_m[inside].sum():
            return False
    return True


def verify_four_node_identity(g, motif, subset):
    """
    Checks ``3 cut_M(S, S̄) + #{instances with exactly 2 nodes in S} = yᵀ L_M y``
    for a 4-node motif and node subset ``S``, in integers.
    """
    _require_motif(motif, (MOTIF_FOUR_CYCLE, MOTIF_K4))
    y = np.zeros(g.n, dtype=np.int64)
    y[list(subset)] = 1

    cut = 0
    exactly_two = 0
    for nodes in enumerate_instances(g, motif):
        inside = int(y[list(nodes)].sum())
        if 0 < inside < 4:
            cut += 1
        if inside == 2:
            exactly_two += 1

    a_m = _integer_matrix(motif_adjacency_bruteforce(g, motif).a_m)
    laplacian = np.diag(a_m.sum(axis=1)) - a_m
    return 3 * cut + exactly_two == int(y @ laplacian @ y)
