# Licensed under AGPL v3 or later

"""
Unsupervised node clustering: one or two assignment levels trained on the
relaxed motif conductance, and the spectral baselines.
"""

import time

import numpy as np

from motif_pool.autodiff import Tape, add, matmul, scale
from motif_pool.graph import sym_normalize
from motif_pool.losses import (
        alpha_at, loss_mc_combined, loss_mincut_ablation, loss_ortho, total_loss)
from motif_pool.metrics import clustering_report
from motif_pool.models import (
        GcnSkipParams, MlpParams, assignment_forward, gcn_skip_forward, hard_labels)
from motif_pool.motifs import edge_adjacency, triangle_adjacency
from motif_pool.pipelines.config import POOLER_MINCUT, POOLER_RANDOM
from motif_pool.pipelines.optim import AdamState, PlateauTracker, optimizer_step
from motif_pool.pipelines.records import STATUS_NUMERICAL_FAILURE, RunRecord
from motif_pool.pooling import cluster_count, coarsen, pooled_motif_adjacencies, random_assignment
from motif_pool.shared.errors import DataError, NumericalError
from motif_pool.spectral import motif_spectral_cluster, spectral_cluster

METHOD_GNN = 'gnn'
METHOD_SC = 'sc'
METHOD_MSC = 'msc'

METHODS = (METHOD_GNN, METHOD_SC, METHOD_MSC)


class LevelInputs(object):
    """Constant graph quantities one assignment level is trained against."""
    def __init__(self, adj_norm, a_edge, a_tri):
        self.adj_norm = adj_norm
        self.a_edge = a_edge
        self.a_tri = a_tri

    @classmethod
    def of_graph(clazz, g):
        return clazz(sym_normalize(g), edge_adjacency(g), triangle_adjacency(g))

    @classmethod
    def of_pooled(clazz, pooled, threshold):
        a_edge, a_tri = pooled_motif_adjacencies(pooled.adj_pool, threshold)
        return clazz(pooled.adj_pool.data, a_edge, a_tri)


class LossTerms(object):
    def __init__(self, l_mc, l_o, l_sup, total):
        self.l_mc = l_mc
        self.l_o = l_o
        self.l_sup = l_sup
        self.total = total

    def values(self):
        return tuple(None if t is None else t.item()
                     for t in (self.l_mc, self.l_o, self.l_sup, self.total))


def mean_of(tensors):
    tensors = [t for t in tensors if t is not None]
    if not tensors:
        return None
    result = tensors[0]
    for t in tensors[1:]:
        result = add(result, t)
    return scale(result, 1.0 / len(tensors)) if len(tensors) > 1 else result


def unsupervised_terms(s, level, cfg, epoch):
    """``(L_mc, L_o)`` of one assignment level under the configured pooler."""
    if cfg.pooler == POOLER_MINCUT:
        l_mc = loss_mincut_ablation(s, level.adj_norm)
    else:
        alpha1, alpha2 = alpha_at(cfg.alpha_schedule(), epoch)
        l_mc = loss_mc_combined(s, level.a_edge, level.a_tri, alpha1, alpha2)
    l_o = loss_ortho(s) if cfg.mu > 0 else None
    return l_mc, l_o


class ClusteringModel(object):
    """GCN-skip followed by an MLP assignment head."""
    def __init__(self, gcn, mlp):
        self.gcn = gcn
        self.mlp = mlp

    @classmethod
    def initialize(clazz, rng, f_in, cfg, k):
        return clazz(GcnSkipParams.initialize(rng, f_in, cfg.hidden),
                     MlpParams.initialize(rng, cfg.hidden, [cfg.mlp_hidden], k))

    def arrays(self):
        return self.gcn.arrays() + self.mlp.arrays()

    def bind(self, tape):
        return ClusteringModel(self.gcn.bind(tape), self.mlp.bind(tape))

    def assign(self, tape, g, level):
        x = tape.constant(g.features)
        return assignment_forward(gcn_skip_forward(level.adj_norm, x, self.gcn), self.mlp)

    def loss(self, tape, g, level, cfg, epoch):
        s = self.assign(tape, g, level)
        l_mc, l_o = unsupervised_terms(s, level, cfg, epoch)
        return LossTerms(l_mc, l_o, None, total_loss(l_mc, l_o, None, cfg.mu))


class TwoLevelClusteringModel(object):
    """MP, pool, MP, pool; the node assignment is the product ``S₁ S₂``."""
    def __init__(self, gcn1, mlp1, gcn2, mlp2):
        self.gcn1 = gcn1
        self.mlp1 = mlp1
        self.gcn2 = gcn2
        self.mlp2 = mlp2

    @classmethod
    def initialize(clazz, rng, f_in, cfg, k1, k2):
        return clazz(GcnSkipParams.initialize(rng, f_in, cfg.hidden),
                     MlpParams.initialize(rng, cfg.hidden, [cfg.mlp_hidden], k1),
                     GcnSkipParams.initialize(rng, cfg.hidden, cfg.hidden),
                     MlpParams.initialize(rng, cfg.hidden, [cfg.mlp_hidden], k2))

    def arrays(self):
        return self.gcn1.arrays() + self.mlp1.arrays() + self.gcn2.arrays() + self.mlp2.arrays()

    def bind(self, tape):
        return TwoLevelClusteringModel(self.gcn1.bind(tape), self.mlp1.bind(tape),
                                       self.gcn2.bind(tape), self.mlp2.bind(tape))

    def _levels(self, tape, g, level):
        h1 = gcn_skip_forward(level.adj_norm, tape.constant(g.features), self.gcn1)
        s1 = assignment_forward(h1, self.mlp1)
        pooled = coarsen(g.adjacency, h1, s1)
        h2 = gcn_skip_forward(pooled.adj_pool, pooled.x_pool, self.gcn2)
        s2 = assignment_forward(h2, self.mlp2)
        return s1, pooled, s2

    def assign(self, tape, g, level):
        s1, _pooled, s2 = self._levels(tape, g, level)
        return matmul(s1, s2)

    def loss(self, tape, g, level, cfg, epoch):
        s1, pooled, s2 = self._levels(tape, g, level)
        l_mc1, l_o1 = unsupervised_terms(s1, level, cfg, epoch)
        l_mc2, l_o2 = unsupervised_terms(s2, LevelInputs.of_pooled(pooled, cfg.motif_threshold),
                                         cfg, epoch)
        l_mc = mean_of([l_mc1, l_mc2])
        l_o = mean_of([l_o1, l_o2])
        return LossTerms(l_mc, l_o, None, total_loss(l_mc, l_o, None, cfg.mu))


def settled_total(build_loss, model, epoch, settled_epoch, total):
    """
    Total loss under the motif weights that hold from ``settled_epoch`` on,
    so that values from different epochs of the ramp stay comparable.
    """
    if epoch >= settled_epoch:
        return total
    scratch = Tape()
    return build_loss(scratch, model.bind(scratch), settled_epoch).total.item()


def fit(model, build_loss, cfg, record, messenger=None):
    """
    Minimises ``build_loss(tape, bound_model, epoch).total`` with Adam,
    halving the learning rate on plateaus and stopping early; the
    parameters with the lowest settled loss seen are restored at the end.
    """
    params = model.arrays()
    state = AdamState(params, cfg.lr)
    tracker = PlateauTracker(cfg.early_stop_patience, cfg.lr_decay_patience,
                             cfg.lr_decay_factor, cfg.min_lr)
    settled_epoch = cfg.alpha_settled_epoch()
    tape = Tape()
    epoch = -1
    for epoch in range(cfg.max_epochs):
        tape.reset()
        terms = build_loss(tape, model.bind(tape), epoch)
        l_mc, l_o, l_sup, total = terms.values()
        tracker.observe(epoch, (settled_total(build_loss, model, epoch, settled_epoch, total),),
                        params)
        tape.backward(terms.total)
        optimizer_step(params, [p.grad for p in tape.parameters()], state, cfg)
        record.append_trace(epoch, l_mc, l_o, l_sup, total, state.lr)

        if messenger is not None and epoch % cfg.log_every == 0:
            messenger.progress('[seed %d] epoch %d: loss %.5f, lr %g'
                               % (record.seed, epoch, total, state.lr))
        tracker.maybe_decay(state)
        if tracker.should_stop():
            break

    tracker.restore(params)
    record.epochs_run = epoch + 1
    record.best_epoch = tracker.best_epoch


def cluster_target(g, cfg):
    if g.node_labels is None:
        raise DataError('Clustering needs ground-truth node labels to evaluate against')
    if g.features is None:
        raise DataError('Clustering needs node features')
    k = cfg.num_clusters or int(np.unique(g.node_labels).size)
    if k < 2:
        raise DataError('Ground truth has a single class; at least 2 clusters are needed')
    return k


def _train_and_report(g, cfg, seed, method, model, level, messenger):
    record = RunRecord(cfg.config_hash(), seed, cfg.mode, method)
    started = time.perf_counter()
    try:
        if cfg.pooler == POOLER_RANDOM:
            s = random_assignment(g.n, cluster_target(g, cfg), seed)
        else:
            fit(model, lambda tape, bound, epoch: bound.loss(tape, g, level, cfg, epoch),
                cfg, record, messenger)
            tape = Tape()
            s = model.bind(tape).assign(tape, g, level).data
        labels = hard_labels(s)
        record.metrics = clustering_report(g, labels, g.node_labels, s).to_dict()
    except NumericalError as e:
        record.status = STATUS_NUMERICAL_FAILURE
        record.error = str(e)
    record.wall_time = time.perf_counter() - started
    return record


def run_clustering(g, cfg, seed, messenger=None):
    k = cluster_target(g, cfg)
    rng = np.random.default_rng(seed)
    model = ClusteringModel.initialize(rng, g.features.shape[1], cfg, k)
    return _train_and_report(g, cfg, seed, cfg.pooler, model, LevelInputs.of_graph(g), messenger)


def run_clustering_2layer(g, cfg, seed, messenger=None):
    k2 = cluster_target(g, cfg)
    k1 = cluster_count(g.n, cfg.pool_ratio)
    if k1 < 2:
        raise DataError('Graph of %d nodes is too small for an intermediate pooling level' % g.n)
    rng = np.random.default_rng(seed)
    model = TwoLevelClusteringModel.initialize(rng, g.features.shape[1], cfg, k1, k2)
    return _train_and_report(g, cfg, seed, cfg.pooler, model, LevelInputs.of_graph(g), messenger)


def run_spectral(g, cfg, seed, method):
    if method not in (METHOD_SC, METHOD_MSC):
        raise ValueError('Unknown spectral method "%s"' % method)
    k = cluster_target(g, cfg)
    record = RunRecord(cfg.config_hash(), seed, cfg.mode, method)
    started = time.perf_counter()
    try:
        cluster = spectral_cluster if method == METHOD_SC else motif_spectral_cluster
        labels = cluster(g, k, seed)
        record.metrics = clustering_report(g, labels, g.node_labels, k=k).to_dict()
    except NumericalError as e:
        record.status = STATUS_NUMERICAL_FAILURE
        record.error = str(e)
    record.wall_time = time.perf_counter() - started
    return record
