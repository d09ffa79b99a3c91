# Licensed under AGPL v3 or later

import os
import shutil
import tempfile
from unittest import TestCase

from motif_pool.losses import alpha_at
from motif_pool.pipelines.config import (
        MODE_CLASSIFY, MODE_CLUSTER, MODE_CLUSTER_2LAYER, POOLER_HP1, POOLER_HP2,
        POOLER_MINCUT, POOLER_NOPOOL, ExperimentConfig, apply_overrides,
        load_config_mapping, resolve_config, write_config)
from motif_pool.shared.errors import DataError


class TestModeDefaults(TestCase):
    def test_some(self):
        for mode, max_epochs, early_stop, lr_decay, dataset in (
                (MODE_CLUSTER, 500, 200, 25, 'syn1'),
                (MODE_CLUSTER_2LAYER, 1000, 500, 25, 'karate'),
                (MODE_CLASSIFY, 500, 100, 50, 'gc'),
                ):
            cfg = ExperimentConfig(mode=mode)
            self.assertEqual(cfg.max_epochs, max_epochs)
            self.assertEqual(cfg.early_stop_patience, early_stop)
            self.assertEqual(cfg.lr_decay_patience, lr_decay)
            self.assertEqual(cfg.dataset, {'kind': dataset})
            self.assertEqual(cfg.alpha_ramp_epochs, max_epochs // 2)

    def test_shared_defaults(self):
        cfg = ExperimentConfig()
        self.assertEqual(cfg.lr, 0.001)
        self.assertEqual(cfg.grad_clip, 2.0)
        self.assertEqual(cfg.pool_ratio, 0.25)
        self.assertEqual(cfg.hidden, 32)
        self.assertEqual(cfg.seeds, [0])


class TestValidation(TestCase):
    def test_invalid(self):
        for values in (
                {'learning_rate': 0.1},
                {'mode': 'regress'},
                {'hidden': 8},
                {'mlp_hidden': 65},
                {'batch_size': 128},
                {'pool_ratio': 1.0},
                {'pooler': 'diffpool'},
                {'pooler': POOLER_NOPOOL},
                {'mu': -0.1},
                {'alpha2_floor': 0.8, 'alpha2_start': 0.6},
                {'min_lr': 0.01},
                {'seeds': []},
                {'num_clusters': 1},
                {'dataset': 'karate'},
                ):
            with self.assertRaises(ValueError):
                ExperimentConfig(**values)

    def test_dataset_parameters_refine_mode_default(self):
        for mode, dataset, expected in (
                (MODE_CLASSIFY, {'n_graphs': 40}, {'kind': 'gc', 'n_graphs': 40}),
                (MODE_CLUSTER, {'seed': 3}, {'kind': 'syn1', 'seed': 3}),
                (MODE_CLUSTER, {'kind': 'karate'}, {'kind': 'karate'}),
                ):
            self.assertEqual(ExperimentConfig(mode=mode, dataset=dataset).dataset, expected)

    def test_nopool_for_classification(self):
        self.assertEqual(ExperimentConfig(mode=MODE_CLASSIFY, pooler=POOLER_NOPOOL).pooler,
                         POOLER_NOPOOL)


class TestHashAndSchedule(TestCase):
    def test_hash_ignores_seeds(self):
        a = ExperimentConfig(seeds=[0, 1])
        self.assertEqual(a.config_hash(), ExperimentConfig(seeds=[5]).config_hash())
        self.assertNotEqual(a.config_hash(), a.replace(mu=1.0).config_hash())
        self.assertEqual(len(a.config_hash()), 12)

    def test_fixed_schedules(self):
        for pooler, expected in ((POOLER_HP1, (1.0, 0.0)), (POOLER_HP2, (0.0, 1.0))):
            schedule = ExperimentConfig(pooler=pooler).alpha_schedule()
            for epoch in (0, 100, 1000):
                self.assertEqual(alpha_at(schedule, epoch), expected)

    def test_default_schedule_ramps(self):
        schedule = ExperimentConfig().alpha_schedule()
        self.assertEqual(alpha_at(schedule, 0), (0.0, 1.0))
        for epoch in (250, 400):
            alpha1, alpha2 = alpha_at(schedule, epoch)
            self.assertAlmostEqual(alpha1, 0.5, places=12)
            self.assertAlmostEqual(alpha2, 0.5, places=12)

    def test_settled_epoch(self):
        for values, expected in (
                ({}, 250),
                ({'max_epochs': 30}, 15),
                ({'alpha_ramp_epochs': 7}, 7),
                ({'pooler': POOLER_HP1}, 0),
                ({'pooler': POOLER_HP2}, 0),
                ({'pooler': POOLER_MINCUT}, 0),
                ):
            self.assertEqual(ExperimentConfig(**values).alpha_settled_epoch(), expected, values)


class TestOverridesAndFiles(TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def _write(self, content):
        path = os.path.join(self.directory, 'cfg.yaml')
        with open(path, 'w') as f:
            f.write(content)
        return path

    def test_overrides(self):
        mapping = apply_overrides({'mu': 0.1, 'dataset': {'kind': 'syn1'}},
                                  [('mu', 0.0), ('dataset.community_size', 20)])
        self.assertEqual(mapping, {'mu': 0.0, 'dataset': {'kind': 'syn1', 'community_size': 20}})
        with self.assertRaises(ValueError):
            apply_overrides({}, [('optimizer.lr', 0.1)])

    def test_precedence(self):
        path = self._write('{"mu": 0.5, "pooler": "hp1", "seeds": [1, 2]}\n')
        cfg = resolve_config(path, [('mu', 0.0)], pooler='mincut', seeds=None)
        self.assertEqual(cfg.mu, 0.0)
        self.assertEqual(cfg.pooler, 'mincut')
        self.assertEqual(cfg.seeds, [1, 2])

    def test_written_config_reproduces(self):
        cfg = ExperimentConfig(mode=MODE_CLASSIFY, seeds=[3, 4], mu=1.0,
                               dataset={'kind': 'gc', 'n_graphs': 40})
        path = os.path.join(self.directory, 'config.yaml')
        write_config(cfg, path)
        again = resolve_config(path)
        self.assertEqual(again.to_mapping(), cfg.to_mapping())
        self.assertEqual(again.config_hash(), cfg.config_hash())

    def test_malformed(self):
        for content in ('mu: [1, 2\n', '- 1\n- 2\n'):
            with self.assertRaises(DataError):
                load_config_mapping(self._write(content))
        self.assertEqual(load_config_mapping(self._write('')), {})
