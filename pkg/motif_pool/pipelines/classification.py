# Licensed under AGPL v3 or later

"""
Graph classification: GNN, pool, GNN, pool, GNN, mean readout, two dense
layers.  Graphs are processed one at a time; a batch loss is the mean of
the per-graph losses.
"""

import time

import numpy as np

from motif_pool.autodiff import Tape, add, cross_entropy_logits, matmul
from motif_pool.losses import total_loss
from motif_pool.models import (
        GcnSkipParams, MlpParams, assignment_forward, gcn_skip_forward, mlp_forward)
from motif_pool.pipelines.clustering import LevelInputs, LossTerms, mean_of, unsupervised_terms
from motif_pool.pipelines.config import POOLER_NOPOOL, POOLER_RANDOM
from motif_pool.pipelines.optim import AdamState, PlateauTracker, optimizer_step
from motif_pool.pipelines.records import STATUS_NUMERICAL_FAILURE, RunRecord
from motif_pool.pooling import cluster_count, coarsen, random_assignment
from motif_pool.shared.errors import DataError, NumericalError


class GraphInputs(object):
    """Per-graph constants, computed once per run."""
    def __init__(self, g, level, s1=None, s2=None):
        self.g = g
        self.level = level
        self.label = g.graph_label
        self.s1 = s1
        self.s2 = s2


def prepare_inputs(data, cfg, seed, k1, k2):
    """
    For the random pooler every graph gets fixed one-hot assignments drawn
    from ``(seed, graph index)``.
    """
    inputs = []
    for index, g in enumerate(data.graphs):
        s1 = s2 = None
        if cfg.pooler == POOLER_RANDOM:
            rng = np.random.default_rng([seed, index])
            k1_here = min(k1, g.n)
            s1 = random_assignment(g.n, k1_here, rng.integers(2 ** 31))
            s2 = random_assignment(k1_here, min(k2, k1_here), rng.integers(2 ** 31))
        inputs.append(GraphInputs(g, LevelInputs.of_graph(g), s1, s2))
    return inputs


def _mean_rows(h):
    n = h.shape[0]
    return matmul(h.tape.constant(np.full((1, n), 1.0 / n)), h)


class ClassificationModel(object):
    def __init__(self, gnn1, gnn2, gnn3, head, pool1=None, pool2=None):
        self.gnn1 = gnn1
        self.gnn2 = gnn2
        self.gnn3 = gnn3
        self.head = head
        self.pool1 = pool1
        self.pool2 = pool2

    @classmethod
    def initialize(clazz, rng, f_in, cfg, k1, k2, num_classes):
        h = cfg.hidden
        learned_pooling = cfg.pooler not in (POOLER_RANDOM, POOLER_NOPOOL)
        return clazz(
                GcnSkipParams.initialize(rng, f_in, h),
                GcnSkipParams.initialize(rng, h, h),
                GcnSkipParams.initialize(rng, h, h),
                MlpParams.initialize(rng, h, [h], num_classes),
                MlpParams.initialize(rng, h, [cfg.mlp_hidden], k1) if learned_pooling else None,
                MlpParams.initialize(rng, h, [cfg.mlp_hidden], k2) if learned_pooling else None,
                )

    def _parts(self):
        return [p for p in (self.gnn1, self.gnn2, self.gnn3, self.head, self.pool1, self.pool2)
                if p is not None]

    def arrays(self):
        result = []
        for part in self._parts():
            result += part.arrays()
        return result

    def bind(self, tape):
        bound = [None if p is None else p.bind(tape)
                 for p in (self.gnn1, self.gnn2, self.gnn3, self.head, self.pool1, self.pool2)]
        return ClassificationModel(*bound)

    def graph_loss(self, tape, inputs, cfg, epoch):
        """Logits (1×C) and the joint loss terms of one graph."""
        level = inputs.level
        x = tape.constant(inputs.g.features)
        h1 = gcn_skip_forward(level.adj_norm, x, self.gnn1)
        l_mc = l_o = None

        if cfg.pooler == POOLER_NOPOOL:
            h2 = gcn_skip_forward(level.adj_norm, h1, self.gnn2)
            h3 = gcn_skip_forward(level.adj_norm, h2, self.gnn3)
        else:
            if cfg.pooler == POOLER_RANDOM:
                s1 = tape.constant(inputs.s1)
            else:
                s1 = assignment_forward(h1, self.pool1)
            pooled1 = coarsen(inputs.g.adjacency, h1, s1)
            h2 = gcn_skip_forward(pooled1.adj_pool, pooled1.x_pool, self.gnn2)
            if cfg.pooler == POOLER_RANDOM:
                s2 = tape.constant(inputs.s2)
            else:
                s2 = assignment_forward(h2, self.pool2)
            pooled2 = coarsen(pooled1.adj_pool, h2, s2)
            h3 = gcn_skip_forward(pooled2.adj_pool, pooled2.x_pool, self.gnn3)

            if cfg.pooler != POOLER_RANDOM:
                l_mc1, l_o1 = unsupervised_terms(s1, level, cfg, epoch)
                l_mc2, l_o2 = unsupervised_terms(
                        s2, LevelInputs.of_pooled(pooled1, cfg.motif_threshold), cfg, epoch)
                l_mc = mean_of([l_mc1, l_mc2])
                l_o = mean_of([l_o1, l_o2])

        readout = _mean_rows(h3)
        if cfg.global_skip:
            readout = add(add(readout, _mean_rows(h1)), _mean_rows(h2))
        logits = mlp_forward(readout, self.head)
        l_sup = cross_entropy_logits(logits, [inputs.label])
        return logits, LossTerms(l_mc, l_o, l_sup, total_loss(l_mc, l_o, l_sup, cfg.mu))


def batch_loss(tape, bound, batch, cfg, epoch):
    """Mean of the per-graph joint losses."""
    terms = [bound.graph_loss(tape, inputs, cfg, epoch)[1] for inputs in batch]
    return LossTerms(mean_of([t.l_mc for t in terms]),
                     mean_of([t.l_o for t in terms]),
                     mean_of([t.l_sup for t in terms]),
                     mean_of([t.total for t in terms]))


def evaluate(model, inputs, indices, cfg, epoch):
    """Accuracy and mean joint loss over ``indices``."""
    tape = Tape()
    correct = 0
    losses = []
    for index in indices:
        tape.reset()
        bound = model.bind(tape)
        logits, terms = bound.graph_loss(tape, inputs[index], cfg, epoch)
        if int(np.argmax(logits.data[0])) == inputs[index].label:
            correct += 1
        losses.append(terms.total.item())
    return correct / float(len(indices)), float(np.mean(losses))


def pooling_sizes(data, cfg):
    k1 = cluster_count(data.max_nodes, cfg.pool_ratio)
    k2 = cluster_count(k1, cfg.pool_ratio)
    if cfg.pooler not in (POOLER_RANDOM, POOLER_NOPOOL) and k2 < 2:
        raise DataError('Graphs of at most %d nodes are too small for two pooling levels'
                        % data.max_nodes)
    return k1, k2


def run_classification(data, cfg, seed, messenger=None):
    data = data.resplit(seed)
    train, val, test = data.split
    if not (train and val and test):
        raise DataError('Train, validation and test splits must all be non-empty')

    k1, k2 = pooling_sizes(data, cfg)
    record = RunRecord(cfg.config_hash(), seed, cfg.mode, cfg.pooler)
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    model = ClassificationModel.initialize(rng, data.num_features, cfg, k1, k2, data.num_classes)

    try:
        inputs = prepare_inputs(data, cfg, seed, k1, k2)
        _fit_classifier(model, inputs, (train, val), cfg, record, rng, messenger)
        settled_epoch = cfg.alpha_settled_epoch()
        val_accuracy, _val_loss = evaluate(model, inputs, val, cfg, settled_epoch)
        test_accuracy, _test_loss = evaluate(model, inputs, test, cfg, settled_epoch)
        record.metrics = {
            'val_accuracy': val_accuracy,
            'test_accuracy': test_accuracy,
        }
    except NumericalError as e:
        record.status = STATUS_NUMERICAL_FAILURE
        record.error = str(e)
    record.wall_time = time.perf_counter() - started
    return record


def _fit_classifier(model, inputs, split, cfg, record, rng, messenger):
    """
    Mini-batch Adam; after every epoch the model is validated and the one
    with the best validation accuracy (ties: lower validation loss under the
    settled motif weights) is kept.
    """
    train, val = split
    params = model.arrays()
    state = AdamState(params, cfg.lr)
    tracker = PlateauTracker(cfg.early_stop_patience, cfg.lr_decay_patience,
                             cfg.lr_decay_factor, cfg.min_lr)
    settled_epoch = cfg.alpha_settled_epoch()
    tape = Tape()
    epoch = -1
    for epoch in range(cfg.max_epochs):
        order = rng.permutation(train)
        sums = np.zeros(4)
        seen = np.zeros(4)
        for start in range(0, len(order), cfg.batch_size):
            batch = [inputs[i] for i in order[start:start + cfg.batch_size]]
            tape.reset()
            terms = batch_loss(tape, model.bind(tape), batch, cfg, epoch)
            tape.backward(terms.total)
            optimizer_step(params, [p.grad for p in tape.parameters()], state, cfg)
            for column, value in enumerate(terms.values()):
                if value is not None:
                    sums[column] += value * len(batch)
                    seen[column] += len(batch)
        means = [sums[c] / seen[c] if seen[c] else None for c in range(4)]
        record.append_trace(epoch, means[0], means[1], means[2], means[3], state.lr)

        val_accuracy, val_loss = evaluate(model, inputs, val, cfg, settled_epoch)
        tracker.observe(epoch, (-val_accuracy, val_loss), params)
        if messenger is not None and epoch % cfg.log_every == 0:
            messenger.progress('[seed %d] epoch %d: loss %.5f, val acc %.3f, lr %g'
                               % (record.seed, epoch, means[3], val_accuracy, state.lr))
        tracker.maybe_decay(state)
        if tracker.should_stop():
            break

    tracker.restore(params)
    record.epochs_run = epoch + 1
    record.best_epoch = tracker.best_epoch
