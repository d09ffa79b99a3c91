# Licensed under AGPL v3 or later

import os

from motif_pool.commands.base import (
        Command, add_experiment_options, ensure_directory_writable,
        exit_code_for_records, output_root)
from motif_pool.datasets import load_node_dataset
from motif_pool.pipelines.clustering import (
        METHOD_GNN, METHODS, run_clustering, run_clustering_2layer, run_spectral)
from motif_pool.pipelines.config import (
        MODE_CLASSIFY, MODE_CLUSTER_2LAYER, POOLER_NOPOOL, POOLERS, resolve_config)
from motif_pool.pipelines.records import write_results
from motif_pool.shared.executor import Executor, RunTask


class ClusterCommand(Command):
    COMMAND_KEY = 'cluster'
    COMMAND_HELP = 'cluster the nodes of a graph and evaluate against ground truth'

    @classmethod
    def add_arguments_to(clazz, command):
        add_experiment_options(command)
        command.add_argument('--method', choices=METHODS, default=METHOD_GNN,
            help='learned assignment or a spectral baseline (default: %(default)s)')
        command.add_argument('--pooler', choices=[p for p in POOLERS if p != POOLER_NOPOOL],
            help='loss variant of the learned assignment (default: taken from config)')
        command.add_argument('--two-layer', dest='two_layer', action='store_true',
            help='stack two assignment levels and cluster by their product')

    def _tasks(self, g, cfg, method):
        for seed in cfg.seeds:
            label = '%s on %s, seed %d' % (method if method != METHOD_GNN else cfg.pooler,
                                           cfg.dataset['kind'], seed)
            if method != METHOD_GNN:
                yield RunTask(label, run_spectral, g, cfg, seed, method)
            elif cfg.mode == MODE_CLUSTER_2LAYER:
                yield RunTask(label, run_clustering_2layer, g, cfg, seed, self._messenger)
            else:
                yield RunTask(label, run_clustering, g, cfg, seed, self._messenger)

    def run(self):
        options = self._options
        cfg = resolve_config(options.config, options.overrides,
                             mode=MODE_CLUSTER_2LAYER if options.two_layer else None,
                             seeds=options.seeds,
                             pooler=options.pooler)
        if cfg.mode == MODE_CLASSIFY:
            raise ValueError('Configuration is for classification; use the "classify" command')
        if cfg.mode == MODE_CLUSTER_2LAYER and options.method != METHOD_GNN:
            raise ValueError('Two assignment levels only apply to method "%s"' % METHOD_GNN)

        out_dir = options.out or os.path.join(
                output_root(), '%s-%s-%s' % (cfg.mode, options.method, cfg.config_hash()))
        ensure_directory_writable(self._messenger, out_dir)

        self._messenger.info('Loading dataset "%s"...' % cfg.dataset['kind'])
        g = load_node_dataset(cfg.dataset)

        executor = Executor(self._messenger, options.workers)
        records = executor.map(self._tasks(g, cfg, options.method))
        for record in records:
            if record.failed:
                self._messenger.warn('Seed %d failed: %s' % (record.seed, record.error))

        self._summarize(out_dir, write_results(out_dir, cfg, records))
        return exit_code_for_records(records)
