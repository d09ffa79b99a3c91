# Licensed under AGPL v3 or later

import networkx as nx
import numpy as np

from motif_pool.autodiff import gradient_check, softmax_rows
from motif_pool.commands.base import Command, print_json
from motif_pool.datasets.base import from_networkx
from motif_pool.losses import loss_mc_combined, loss_ortho, total_loss
from motif_pool.motifs import (
        MOTIF_FOUR_CYCLE, MOTIF_K4, MOTIF_TRIANGLE, edge_adjacency,
        enumerate_instances, motif_adjacency_bruteforce, triangle_adjacency,
        verify_four_node_identity, verify_triangle_identity)
from motif_pool.shared.errors import EXIT_NUMERICAL
from motif_pool.types.ratio import ratio_type

GRADIENT_TOLERANCE = 1e-4
VERIFY_CLUSTERS = 3

CHECK_NAMES = (
    'triangle_oracle',
    'triangle_count',
    'triangle_cut_volume',
    'four_cycle_quadratic_form',
    'k4_quadratic_form',
    'loss_gradient',
)


def check_graph(g, rng):
    """Runs every exact check on ``g``; returns ``{check name: passed}``."""
    a_edge = edge_adjacency(g)
    a_tri = triangle_adjacency(g)
    nx_graph = nx.from_scipy_sparse_array(g.adjacency)
    partition = rng.integers(0, VERIFY_CLUSTERS, size=g.n)
    subset = np.flatnonzero(rng.integers(0, 2, size=g.n))
    logits = rng.normal(size=(g.n, VERIFY_CLUSTERS))

    def build_loss(tape, z):
        s = softmax_rows(z)
        return total_loss(loss_mc_combined(s, a_edge, a_tri, 0.5, 0.5), loss_ortho(s), None, 1.0)

    results = {
        'triangle_oracle':
            (motif_adjacency_bruteforce(g, MOTIF_TRIANGLE).a_m != a_tri.a_m).nnz == 0,
        'triangle_count':
            len(enumerate_instances(g, MOTIF_TRIANGLE)) == sum(nx.triangles(nx_graph).values()) // 3,
        'triangle_cut_volume': verify_triangle_identity(g, partition),
        'four_cycle_quadratic_form': verify_four_node_identity(g, MOTIF_FOUR_CYCLE, subset),
        'k4_quadratic_form': verify_four_node_identity(g, MOTIF_K4, subset),
        'loss_gradient': gradient_check(build_loss, [logits]) < GRADIENT_TOLERANCE,
    }
    return dict((name, bool(passed)) for name, passed in results.items())


def verify_random_graphs(count, n, p, seed):
    """
    Checks ``count`` Erdős–Rényi graphs; returns per-check pass counts and
    the indices of graphs that failed anything.
    """
    rng = np.random.default_rng(seed)
    passed = dict((name, 0) for name in CHECK_NAMES)
    failing = []
    for index in range(count):
        g = from_networkx(nx.gnp_random_graph(n, p, seed=int(rng.integers(2 ** 31))))
        results = check_graph(g, rng)
        for name, ok in results.items():
            passed[name] += int(ok)
        if not all(results.values()):
            failing.append(index)
    return passed, failing


class VerifyCommand(Command):
    COMMAND_KEY = 'verify'
    COMMAND_HELP = 'check motif identities and loss gradients on random graphs'

    @classmethod
    def add_arguments_to(clazz, command):
        command.add_argument('--graphs', type=int, default=50,
            help='number of random graphs (default: %(default)s)')
        command.add_argument('--n', type=int, default=20,
            help='nodes per graph (default: %(default)s)')
        command.add_argument('--p', type=ratio_type, default=0.3,
            help='edge probability (default: %(default)s)')
        command.add_argument('--seed', type=int, default=0,
            help='seed (default: %(default)s)')

    def run(self):
        options = self._options
        if options.graphs < 1 or options.n < VERIFY_CLUSTERS:
            raise ValueError('Need at least 1 graph of at least %d nodes' % VERIFY_CLUSTERS)

        self._messenger.info('Checking %d random graphs of %d nodes...'
                             % (options.graphs, options.n))
        passed, failing = verify_random_graphs(options.graphs, options.n, options.p,
                                               options.seed)
        print_json({
            'graphs': options.graphs,
            'n': options.n,
            'p': options.p,
            'seed': options.seed,
            'passed': passed,
            'failing_graphs': failing,
            'ok': not failing,
        })
        if failing:
            self._messenger.error('%d graph(s) failed verification' % len(failing))
            return EXIT_NUMERICAL
