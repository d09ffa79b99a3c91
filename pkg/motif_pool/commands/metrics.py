# Licensed under AGPL v3 or later

import os

import pandas as pd

from motif_pool.commands.base import Command, print_json
from motif_pool.datasets.edge_list import read_edge_list, read_labels
from motif_pool.metrics import clustering_report
from motif_pool.shared.errors import DataError


def append_to_ledger(path, row):
    """Appends ``row`` to a CSV file, writing the header only for a new file."""
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    if exists:
        columns = list(pd.read_csv(path, nrows=0).columns)
        if sorted(columns) != sorted(row):
            raise DataError('Ledger %s has columns %s, cannot append %s'
                            % (path, ', '.join(columns), ', '.join(sorted(row))))
    else:
        columns = sorted(row)
    pd.DataFrame([row], columns=columns).to_csv(path, mode='a', header=not exists, index=False)


class MetricsCommand(Command):
    COMMAND_KEY = 'metrics'
    COMMAND_HELP = 'evaluate a given node partition against ground truth'

    @classmethod
    def add_arguments_to(clazz, command):
        command.add_argument('--edges', metavar='FILE', required=True,
            help='edge list of the graph')
        command.add_argument('--labels', metavar='FILE', required=True,
            help='ground-truth label per node, one per line')
        command.add_argument('--partition', metavar='FILE', required=True,
            help='predicted cluster per node, one per line')
        command.add_argument('--ledger', metavar='CSV',
            help='CSV file to append the report to')
        command.add_argument('--name', default='',
            help='label of the row appended to the ledger')

    def run(self):
        options = self._options
        truth = read_labels(options.labels)
        predicted = read_labels(options.partition)
        if truth.size != predicted.size:
            raise DataError('%d ground-truth labels but %d predicted clusters'
                            % (truth.size, predicted.size))
        g = read_edge_list(options.edges, n=truth.size)
        report = clustering_report(g, predicted, truth).to_dict()
        print_json(report)

        if options.ledger:
            row = dict(report)
            row['name'] = options.name
            row['partition'] = options.partition
            append_to_ledger(options.ledger, row)
            self._messenger.info('Appended to ledger "%s".' % options.ledger)
