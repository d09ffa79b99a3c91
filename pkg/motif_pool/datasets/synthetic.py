# Licensed under AGPL v3 or later

"""
Synthetic graphs whose ground truth is defined by triangle structure.
"""

import itertools

import networkx as nx
import numpy as np

from motif_pool.datasets.base import LabeledGraphSet, from_networkx, standardized_columns
from motif_pool.graph import build_graph
from motif_pool.motifs import node_triangle_counts
from motif_pool.shared.errors import DataError

KIND_SYN1 = 'syn1'
KIND_SYN2 = 'syn2'
KIND_SYN3 = 'syn3'
KIND_GC = 'gc'

GENERATOR_KINDS = (KIND_SYN1, KIND_SYN2, KIND_SYN3, KIND_GC)

FEATURE_WIDTH = 10

SYN2_NODES = 1000
SYN2_EDGE_PROBABILITY = 0.012

SYN3_NODES = 500
SYN3_P_IN = 0.8
SYN3_P_OUT = 0.2

GC_MIN_GRAPHS = 20
GC_REWIRING_ATTEMPTS = 100
GC_SMALLEST_GRAPH = 8


class GeneratorSpec(object):
    _DEFAULTS = {
        KIND_SYN1: {'k': 3, 'community_size': 50, 'extra_triangles': 5, 'inter_ratio': 2.0},
        KIND_SYN2: {'n': SYN2_NODES, 'p': SYN2_EDGE_PROBABILITY},
        KIND_SYN3: {'k': 5, 'n': SYN3_NODES, 'p_in': SYN3_P_IN, 'p_out': SYN3_P_OUT},
        KIND_GC: {'n_graphs': 100, 'min_nodes': 12, 'max_nodes': 30},
    }

    def __init__(self, kind, seed=0, **params):
        if kind not in GENERATOR_KINDS:
            raise ValueError('Unknown generator "%s", expected one of: %s'
                             % (kind, ', '.join(GENERATOR_KINDS)))
        unknown = set(params) - set(self._DEFAULTS[kind])
        if unknown:
            raise ValueError('Generator "%s" does not take parameter(s): %s'
                             % (kind, ', '.join(sorted(unknown))))
        self.kind = kind
        self.seed = int(seed)
        self.params = dict(self._DEFAULTS[kind])
        self.params.update(params)

    def generate(self):
        p = self.params
        if self.kind == KIND_SYN1:
            return gen_syn1(p['k'], self.seed, p['community_size'], p['extra_triangles'],
                            p['inter_ratio'])
        if self.kind == KIND_SYN2:
            return gen_syn2(self.seed, p['n'], p['p'])
        if self.kind == KIND_SYN3:
            return gen_syn3(p['k'], self.seed, p['n'], p['p_in'], p['p_out'])
        return gen_gc_synthetic(p['n_graphs'], self.seed, p['min_nodes'], p['max_nodes'])


def _plant_triangle_tree(nodes, rng, edges):
    """
    Connects ``nodes`` so that every node lies on a triangle and the
    triangles form one connected piece: each new node attaches to both ends
    of an existing edge.
    """
    nodes = list(nodes)
    rng.shuffle(nodes)
    a, b, c = nodes[:3]
    local = [(a, b), (b, c), (a, c)]
    for u in nodes[3:]:
        v, w = local[rng.integers(len(local))]
        local += [(u, v), (u, w)]
    edges.update(tuple(sorted(e)) for e in local)


def _add_random_triangles(nodes, count, rng, edges):
    nodes = np.asarray(nodes)
    for _ in range(count):
        u, v, w = rng.choice(nodes, size=3, replace=False)
        edges.update(tuple(sorted(e)) for e in ((u, v), (v, w), (u, w)))


def gen_syn1(k=3, seed=0, community_size=50, extra_triangles=5, inter_ratio=2.0):
    """
    ``k`` triangle-dense communities linked to each other only by edges that
    close no triangle.

    Inter-community candidates are scanned once in random order and accepted
    while their endpoints share no neighbour, until ``inter_ratio`` times the
    intra-community edge count is reached.
    """
    if k < 2:
        raise ValueError('Syn1 needs at least 2 communities, got %d' % k)
    if community_size < 3:
        raise ValueError('Communities need at least 3 nodes, got %d' % community_size)
    rng = np.random.default_rng(seed)
    n = k * community_size
    labels = np.repeat(np.arange(k), community_size)

    intra = set()
    for c in range(k):
        members = range(c * community_size, (c + 1) * community_size)
        _plant_triangle_tree(members, rng, intra)
        _add_random_triangles(list(members), extra_triangles, rng, intra)

    neighbors = [set() for _ in range(n)]
    for u, v in intra:
        neighbors[u].add(v)
        neighbors[v].add(u)

    target = int(round(inter_ratio * len(intra)))
    candidates = [(u, v) for u, v in itertools.combinations(range(n), 2)
                  if labels[u] != labels[v]]
    order = rng.permutation(len(candidates))
    inter = []
    for index in order:
        if len(inter) >= target:
            break
        u, v = candidates[index]
        if neighbors[u] & neighbors[v]:
            continue
        inter.append((u, v))
        neighbors[u].add(v)
        neighbors[v].add(u)

    if len(inter) < target:
        raise DataError('Placed only %d of %d inter-community edges without closing a triangle'
                        % (len(inter), target))

    features = rng.normal(size=(n, FEATURE_WIDTH))
    features[:, -1] = labels + rng.normal(scale=0.1, size=n)
    return build_graph(sorted(intra) + inter, n, features, labels)


def gen_syn2(seed=0, n=SYN2_NODES, p=SYN2_EDGE_PROBABILITY):
    """
    G(n, p); a node is labelled 1 iff it lies on a triangle.  Features are
    degree, triangle count and clustering coefficient, padded with noise.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError('Edge probability must lie in [0, 1], got %r' % p)
    rng = np.random.default_rng(seed)
    nx_graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(2 ** 31)))
    g = from_networkx(nx_graph)

    triangles = node_triangle_counts(g)
    clustering = nx.clustering(nx_graph)
    statistics = np.column_stack([
        np.asarray([d for _node, d in sorted(nx_graph.degree())], dtype=np.float64),
        triangles.astype(np.float64),
        np.asarray([clustering[i] for i in range(n)], dtype=np.float64),
    ])
    noise = rng.normal(size=(n, FEATURE_WIDTH - statistics.shape[1]))
    features = np.hstack([standardized_columns(statistics), noise])
    return g.with_features(features).with_labels(node_labels=(triangles > 0).astype(np.int64))


def partition_sizes(n, k, rng):
    """``k`` sizes drawn around ``n / k`` and rescaled to sum to ``n``, each at least 2."""
    if n < 2 * k:
        raise ValueError('Cannot form %d partitions from %d nodes' % (k, n))
    raw = np.clip(rng.normal(n / float(k), n / (4.0 * k), size=k), 2.0, None)
    sizes = np.maximum(np.floor(raw * n / raw.sum()).astype(np.int64), 2)
    while sizes.sum() > n:
        sizes[np.argmax(sizes)] -= 1
    sizes[np.argmin(sizes)] += n - sizes.sum()
    return sizes


def gen_syn3(k=5, seed=0, n=SYN3_NODES, p_in=SYN3_P_IN, p_out=SYN3_P_OUT):
    if k < 2:
        raise ValueError('Syn3 needs at least 2 partitions, got %d' % k)
    rng = np.random.default_rng(seed)
    sizes = partition_sizes(n, k, rng)
    nx_graph = nx.random_partition_graph(sizes.tolist(), p_in, p_out,
                                         seed=int(rng.integers(2 ** 31)))
    labels = np.repeat(np.arange(k), sizes)
    features = rng.normal(size=(n, FEATURE_WIDTH))
    return from_networkx(nx_graph, features, labels)


def _dense_triangle_count(a):
    return int(round(np.trace(a @ a @ a) / 6.0))


def _triangle_rich_adjacency(n, rng):
    """Triangle communities of 5 to 8 nodes, loosely chained together."""
    edges = set()
    communities = []
    start = 0
    while start < n:
        size = int(rng.integers(5, 9))
        if n - (start + size) < 3:
            size = n - start
        communities.append(range(start, start + size))
        _plant_triangle_tree(communities[-1], rng, edges)
        start += size
    for left, right in zip(communities, communities[1:]):
        edges.add((int(rng.choice(left)), int(rng.choice(right))))

    a = np.zeros((n, n))
    for u, v in edges:
        a[u, v] = a[v, u] = 1.0
    return a


def _rewire_triangle_free(a, rng, max_swaps):
    """
    Double-edge swaps that never increase the triangle count, so the degree
    sequence is kept.  Returns the triangle-free adjacency, or ``None`` if
    triangles survive ``max_swaps`` attempts.
    """
    a = a.copy()
    triangles = _dense_triangle_count(a)
    for _ in range(max_swaps):
        if triangles == 0:
            break
        shared = (a @ a) * a
        on_triangle = np.argwhere(np.triu(shared) > 0)
        all_edges = np.argwhere(np.triu(a) > 0)
        u, v = on_triangle[rng.integers(len(on_triangle))]
        x, y = all_edges[rng.integers(len(all_edges))]
        if rng.random() < 0.5:
            x, y = y, x
        if len({u, v, x, y}) < 4 or a[u, x] or a[v, y]:
            continue
        a[u, v] = a[v, u] = a[x, y] = a[y, x] = 0.0
        a[u, x] = a[x, u] = a[v, y] = a[y, v] = 1.0
        swapped = _dense_triangle_count(a)
        if swapped > triangles:
            a[u, x] = a[x, u] = a[v, y] = a[y, v] = 0.0
            a[u, v] = a[v, u] = a[x, y] = a[y, x] = 1.0
        else:
            triangles = swapped
    return a if triangles == 0 else None


def gc_graph_pair(n, rng):
    """
    A triangle-rich adjacency and a triangle-free rewiring of it with the
    same degree sequence.  Bases that do not rewire are drawn anew.
    """
    for _ in range(GC_REWIRING_ATTEMPTS):
        rich = _triangle_rich_adjacency(n, rng)
        free = _rewire_triangle_free(rich, rng, max_swaps=50 * int(rich.sum()))
        if free is not None:
            return rich, free
    raise DataError('No triangle-free rewiring of a %d-node graph found in %d attempts'
                    % (n, GC_REWIRING_ATTEMPTS))


def _graph_of(a, label):
    n = a.shape[0]
    rows, cols = np.nonzero(np.triu(a))
    return build_graph(zip(rows, cols), n, np.ones((n, 1)), graph_label=label)


def gen_gc_synthetic(n_graphs=100, seed=0, min_nodes=12, max_nodes=30):
    """
    Balanced two-class set of consecutive pairs: graph ``2i`` (class 0) is
    built from triangle communities, graph ``2i + 1`` (class 1) is the same
    graph rewired until triangle-free.  All features are constant.
    """
    if n_graphs < GC_MIN_GRAPHS:
        raise ValueError('Need at least %d graphs, got %d' % (GC_MIN_GRAPHS, n_graphs))
    if not GC_SMALLEST_GRAPH <= min_nodes <= max_nodes:
        raise ValueError('Expected %d <= min_nodes <= max_nodes, got %d and %d'
                         % (GC_SMALLEST_GRAPH, min_nodes, max_nodes))
    rng = np.random.default_rng(seed)
    graphs = []
    while len(graphs) < n_graphs:
        rich, free = gc_graph_pair(int(rng.integers(min_nodes, max_nodes + 1)), rng)
        graphs.append(_graph_of(rich, 0))
        if len(graphs) < n_graphs:
            graphs.append(_graph_of(free, 1))
    return LabeledGraphSet(graphs, name='GC')
