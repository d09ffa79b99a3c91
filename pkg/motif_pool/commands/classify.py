# Licensed under AGPL v3 or later

import os

from motif_pool.commands.base import (
        Command, add_experiment_options, ensure_directory_writable,
        exit_code_for_records, output_root)
from motif_pool.datasets import load_graph_dataset
from motif_pool.pipelines.classification import run_classification
from motif_pool.pipelines.config import MODE_CLASSIFY, POOLERS, resolve_config
from motif_pool.pipelines.records import write_results
from motif_pool.shared.executor import Executor, RunTask


class ClassifyCommand(Command):
    COMMAND_KEY = 'classify'
    COMMAND_HELP = 'train and evaluate a pooling graph classifier'

    @classmethod
    def add_arguments_to(clazz, command):
        add_experiment_options(command)
        command.add_argument('--pooler', choices=POOLERS,
            help='pooling operator (default: taken from config)')
        command.add_argument('--global-skip', dest='global_skip', action='store_const',
            const=True,
            help='add the mean node embeddings of every level to the readout')

    def run(self):
        options = self._options
        cfg = resolve_config(options.config, options.overrides,
                             mode=MODE_CLASSIFY,
                             seeds=options.seeds,
                             pooler=options.pooler,
                             global_skip=options.global_skip)

        out_dir = options.out or os.path.join(
                output_root(), '%s-%s-%s' % (cfg.mode, cfg.pooler, cfg.config_hash()))
        ensure_directory_writable(self._messenger, out_dir)

        self._messenger.info('Loading dataset "%s"...' % cfg.dataset['kind'])
        data = load_graph_dataset(cfg.dataset)
        self._messenger.info('%d graphs, %d classes, up to %d nodes.'
                             % (len(data.graphs), data.num_classes, data.max_nodes))

        tasks = [RunTask('%s on %s, seed %d' % (cfg.pooler, cfg.dataset['kind'], seed),
                         run_classification, data, cfg, seed, self._messenger)
                 for seed in cfg.seeds]
        records = Executor(self._messenger, options.workers).map(tasks)
        for record in records:
            if record.failed:
                self._messenger.warn('Seed %d failed: %s' % (record.seed, record.error))

        self._summarize(out_dir, write_results(out_dir, cfg, records))
        return exit_code_for_records(records)
