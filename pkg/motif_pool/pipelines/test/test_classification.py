# Licensed under AGPL v3 or later

from unittest import TestCase

import numpy as np

from motif_pool.autodiff import Tape
from motif_pool.datasets.synthetic import gen_gc_synthetic
from motif_pool.pipelines.classification import (
        ClassificationModel, batch_loss, pooling_sizes, prepare_inputs, run_classification)
from motif_pool.pipelines.config import MODE_CLASSIFY, ExperimentConfig
from motif_pool.pipelines.records import STATUS_OK
from motif_pool.shared.errors import DataError


def _config(**values):
    values.setdefault('mode', MODE_CLASSIFY)
    values.setdefault('max_epochs', 3)
    values.setdefault('pool_ratio', 0.5)
    values.setdefault('batch_size', 8)
    values.setdefault('hidden', 16)
    values.setdefault('mlp_hidden', 16)
    return ExperimentConfig(**values)


class _GraphSetTestCase(TestCase):
    @classmethod
    def setUpClass(clazz):
        clazz.data = gen_gc_synthetic(n_graphs=20, seed=0, min_nodes=12, max_nodes=14)


class TestRunClassification(_GraphSetTestCase):
    def test_poolers(self):
        for pooler in ('hosc', 'mincut', 'random', 'nopool'):
            record = run_classification(self.data, _config(pooler=pooler), seed=0)
            self.assertEqual(record.status, STATUS_OK)
            self.assertEqual(record.method, pooler)
            self.assertEqual(record.epochs_run, 3)
            self.assertEqual(sorted(record.metrics), ['test_accuracy', 'val_accuracy'])
            for value in record.metrics.values():
                self.assertTrue(0.0 <= value <= 1.0)

    def test_traces(self):
        record = run_classification(self.data, _config(), seed=0)
        self.assertEqual(record.traces['epoch'], [0, 1, 2])
        for column in ('l_mc', 'l_o', 'l_sup', 'total'):
            self.assertTrue(np.isfinite(record.traces[column]).all())

        record = run_classification(self.data, _config(pooler='nopool'), seed=0)
        self.assertEqual(record.traces['l_mc'], [None] * 3)

    def test_deterministic(self):
        cfg = _config(global_skip=True)
        first = run_classification(self.data, cfg, seed=2).to_dict(with_wall_time=False)
        second = run_classification(self.data, cfg, seed=2).to_dict(with_wall_time=False)
        self.assertEqual(first, second)


class TestBatchLoss(_GraphSetTestCase):
    def test_mean_of_graph_losses(self):
        cfg = _config()
        k1, k2 = pooling_sizes(self.data, cfg)
        inputs = prepare_inputs(self.data, cfg, 0, k1, k2)
        model = ClassificationModel.initialize(np.random.default_rng(0), 1, cfg, k1, k2, 2)
        tape = Tape()
        bound = model.bind(tape)

        batch = inputs[:4]
        expected = np.mean([bound.graph_loss(tape, g, cfg, 0)[1].total.item() for g in batch])
        received = batch_loss(tape, bound, batch, cfg, 0).total.item()
        self.assertAlmostEqual(received, expected, places=12)

    def test_logits_shape(self):
        cfg = _config(pooler='random')
        k1, k2 = pooling_sizes(self.data, cfg)
        inputs = prepare_inputs(self.data, cfg, 0, k1, k2)
        model = ClassificationModel.initialize(np.random.default_rng(0), 1, cfg, k1, k2, 2)
        self.assertIsNone(model.pool1)
        tape = Tape()
        logits, terms = model.bind(tape).graph_loss(tape, inputs[0], cfg, 0)
        self.assertEqual(logits.shape, (1, 2))
        self.assertIsNone(terms.l_mc)
        self.assertEqual(inputs[0].s1.shape, (self.data.graphs[0].n, k1))


class TestPoolingSizes(_GraphSetTestCase):
    def test_some(self):
        k1 = self.data.max_nodes // 2
        self.assertEqual(pooling_sizes(self.data, _config()), (k1, k1 // 2))
        self.assertEqual(pooling_sizes(self.data, _config(pooler='random', pool_ratio=0.25)),
                         (3, 1))
        with self.assertRaises(DataError):
            pooling_sizes(self.data, _config(pool_ratio=0.25))
