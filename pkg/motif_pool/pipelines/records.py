# Licensed under AGPL v3 or later

import json
import os

import numpy as np
import pandas as pd

from motif_pool.pipelines.config import write_config
from motif_pool.shared.summary import format_mean_std, mean_std

STATUS_OK = 'ok'
STATUS_NUMERICAL_FAILURE = 'numerical-failure'

TRACE_COLUMNS = ('epoch', 'l_mc', 'l_o', 'l_sup', 'total', 'lr')


class RunRecord(object):
    """
    Outcome of one seed: per-epoch traces, final metrics and timing.

    ``metrics`` holds the clustering report fields and/or accuracies;
    ``wall_time`` is the only field allowed to differ between repeats.
    """
    def __init__(self, config_hash, seed, mode, method, traces=None, metrics=None,
                 epochs_run=0, best_epoch=None, wall_time=0.0, status=STATUS_OK, error=None):
        self.config_hash = config_hash
        self.seed = int(seed)
        self.mode = mode
        self.method = method
        self.traces = traces if traces is not None else dict((c, []) for c in TRACE_COLUMNS)
        self.metrics = metrics if metrics is not None else {}
        self.epochs_run = int(epochs_run)
        self.best_epoch = best_epoch
        self.wall_time = float(wall_time)
        self.status = status
        self.error = error

    @property
    def failed(self):
        return self.status != STATUS_OK

    def append_trace(self, epoch, l_mc, l_o, l_sup, total, lr):
        for column, value in zip(TRACE_COLUMNS, (epoch, l_mc, l_o, l_sup, total, lr)):
            self.traces[column].append(value)

    def to_dict(self, with_wall_time=True):
        result = {
            'config_hash': self.config_hash,
            'seed': self.seed,
            'mode': self.mode,
            'method': self.method,
            'status': self.status,
            'error': self.error,
            'epochs_run': self.epochs_run,
            'best_epoch': self.best_epoch,
            'metrics': dict(self.metrics),
            'traces': dict((c, list(v)) for c, v in self.traces.items()),
        }
        if with_wall_time:
            result['wall_time'] = self.wall_time
        return result

    @classmethod
    def from_dict(clazz, values):
        return clazz(values['config_hash'], values['seed'], values['mode'], values['method'],
                     values['traces'], values['metrics'], values['epochs_run'],
                     values['best_epoch'], values.get('wall_time', 0.0), values['status'],
                     values['error'])

    def traces_frame(self):
        return pd.DataFrame(self.traces, columns=list(TRACE_COLUMNS))


def _json_value(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError('Not JSON serializable: %r' % (value,))


def write_record(record, path):
    with open(path, 'w') as f:
        json.dump(record.to_dict(), f, indent=2, sort_keys=True, default=_json_value)
        print(file=f)


def read_record(path):
    with open(path, 'r') as f:
        return RunRecord.from_dict(json.load(f))


def runs_frame(records):
    """One row per run: seed, status, epochs, wall time and every metric."""
    rows = []
    for record in records:
        row = {
            'config_hash': record.config_hash,
            'seed': record.seed,
            'method': record.method,
            'status': record.status,
            'epochs_run': record.epochs_run,
            'wall_time': record.wall_time,
        }
        row.update(record.metrics)
        rows.append(row)
    return pd.DataFrame(rows)


def summary_frame(records):
    """Mean and sample standard deviation of every metric over successful runs."""
    successful = [r for r in records if not r.failed]
    names = []
    for record in successful:
        for name in record.metrics:
            if name not in names:
                names.append(name)

    rows = []
    for name in names:
        values = [r.metrics[name] for r in successful if r.metrics.get(name) is not None]
        if not values:
            continue
        mean, std = mean_std(values)
        rows.append({
            'metric': name,
            'mean': mean,
            'std': std,
            'runs': len(values),
            'formatted': format_mean_std(values),
        })
    return pd.DataFrame(rows, columns=['metric', 'mean', 'std', 'runs', 'formatted'])


def write_results(out_dir, cfg, records):
    """
    Writes the resolved config, one JSON record and trace CSV per seed,
    ``runs.csv`` and ``summary.csv``; returns the summary frame.
    """
    write_config(cfg, os.path.join(out_dir, 'config.yaml'))
    for record in records:
        write_record(record, os.path.join(out_dir, 'run_seed%d.json' % record.seed))
        if record.traces['epoch']:
            record.traces_frame().to_csv(
                    os.path.join(out_dir, 'traces_seed%d.csv' % record.seed), index=False)
    runs_frame(records).to_csv(os.path.join(out_dir, 'runs.csv'), index=False)
    summary = summary_frame(records)
    summary.to_csv(os.path.join(out_dir, 'summary.csv'), index=False)
    return summary
