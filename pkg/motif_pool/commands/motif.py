# Licensed under AGPL v3 or later

import numpy as np

from motif_pool.commands.base import Command, print_json
from motif_pool.datasets import KIND_EDGE_LIST, NODE_DATASET_KINDS, load_node_dataset
from motif_pool.motifs import (
        MOTIF_FOUR_CYCLE, MOTIF_K4, MOTIF_TRIANGLE, ORACLE_MAX_NODES, edge_adjacency,
        enumerate_instances, motif_adjacency_bruteforce, triangle_adjacency,
        triangle_count, verify_four_node_identity, verify_triangle_identity)
from motif_pool.shared.errors import EXIT_NUMERICAL

FOUR_NODE_CHECK_MAX_NODES = 40


def motif_summary(g, seed=0):
    """
    Triangle statistics of ``g`` plus the results of the exact identity
    checks.  Triangle checks run up to the brute-force oracle limit
    (ORACLE_MAX_NODES), the 4-node checks on graphs of at most
    FOUR_NODE_CHECK_MAX_NODES nodes.
    """
    rng = np.random.default_rng(seed)
    a_tri = triangle_adjacency(g)
    partition = rng.integers(0, 2, size=g.n) if g.n else np.zeros(0, dtype=np.int64)

    checks = {}
    if g.n <= ORACLE_MAX_NODES:
        checks['triangle_cut_volume'] = verify_triangle_identity(g, partition)
        checks['triangle_oracle'] = bool(
                (motif_adjacency_bruteforce(g, MOTIF_TRIANGLE).a_m != a_tri.a_m).nnz == 0)
    if g.n <= FOUR_NODE_CHECK_MAX_NODES:
        subset = np.flatnonzero(partition)
        for motif in (MOTIF_FOUR_CYCLE, MOTIF_K4):
            checks['%s_quadratic_form' % motif] = verify_four_node_identity(g, motif, subset)

    result = {
        'nodes': g.n,
        'edges': g.num_edges,
        'triangles': triangle_count(g),
        'edge_density': edge_adjacency(g).density(),
        'triangle_density': a_tri.density(),
        'isolated_in_triangle_adjacency': int((a_tri.d_m == 0).sum()),
        'checks': checks,
    }
    if g.n <= FOUR_NODE_CHECK_MAX_NODES:
        result['four_cycles'] = len(enumerate_instances(g, MOTIF_FOUR_CYCLE))
        result['four_cliques'] = len(enumerate_instances(g, MOTIF_K4))
    return result


class MotifCommand(Command):
    COMMAND_KEY = 'motif'
    COMMAND_HELP = 'print motif statistics of a graph as JSON'

    @classmethod
    def add_arguments_to(clazz, command):
        source = command.add_mutually_exclusive_group(required=True)
        source.add_argument('--edges', metavar='FILE',
            help='edge list to analyse')
        source.add_argument('--dataset', choices=[k for k in NODE_DATASET_KINDS
                                                  if k != KIND_EDGE_LIST],
            help='built-in or generated graph to analyse')
        command.add_argument('--seed', type=int, default=0,
            help='seed of generated graphs and of the random test partition '
                 '(default: %(default)s)')

    def run(self):
        options = self._options
        if options.edges:
            mapping = {'kind': KIND_EDGE_LIST, 'path': options.edges}
        else:
            mapping = {'kind': options.dataset}
        g = load_node_dataset(mapping, default_seed=options.seed)
        summary = motif_summary(g, options.seed)
        print_json(summary)
        if not all(summary['checks'].values()):
            self._messenger.error('Motif identity check failed')
            return EXIT_NUMERICAL
