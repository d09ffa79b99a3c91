# Licensed under AGPL v3 or later

import copy
import hashlib
import json

import motif_pool.shared.loaders._yaml as yaml
from motif_pool.losses import AlphaSchedule
from motif_pool.shared.errors import DataError
from motif_pool.types.ratio import require_open_unit_interval

MODE_CLUSTER = 'cluster'
MODE_CLUSTER_2LAYER = 'cluster-2layer'
MODE_CLASSIFY = 'classify'

MODES = (MODE_CLUSTER, MODE_CLUSTER_2LAYER, MODE_CLASSIFY)

POOLER_HOSC = 'hosc'
POOLER_HP1 = 'hp1'
POOLER_HP2 = 'hp2'
POOLER_MINCUT = 'mincut'
POOLER_RANDOM = 'random'
POOLER_NOPOOL = 'nopool'

POOLERS = (POOLER_HOSC, POOLER_HP1, POOLER_HP2, POOLER_MINCUT, POOLER_RANDOM, POOLER_NOPOOL)

_MODE_DEFAULTS = {
    MODE_CLUSTER: {
        'max_epochs': 500,
        'early_stop_patience': 200,
        'lr_decay_patience': 25,
        'dataset': {'kind': 'syn1'},
    },
    MODE_CLUSTER_2LAYER: {
        'max_epochs': 1000,
        'early_stop_patience': 500,
        'lr_decay_patience': 25,
        'dataset': {'kind': 'karate'},
    },
    MODE_CLASSIFY: {
        'max_epochs': 500,
        'early_stop_patience': 100,
        'lr_decay_patience': 50,
        'dataset': {'kind': 'gc'},
    },
}

_DEFAULTS = {
    'mode': MODE_CLUSTER,
    'seeds': [0],
    'lr': 0.001,
    'grad_clip': 2.0,
    'lr_decay_factor': 0.5,
    'min_lr': 1e-6,
    'mu': 0.1,
    'alpha2_start': 1.0,
    'alpha2_floor': 0.5,
    'alpha_ramp_epochs': None,
    'hidden': 32,
    'mlp_hidden': 32,
    'batch_size': 32,
    'pool_ratio': 0.25,
    'pooler': POOLER_HOSC,
    'num_clusters': None,
    'global_skip': False,
    'motif_threshold': 1e-6,
    'log_every': 50,
    'max_epochs': None,
    'early_stop_patience': None,
    'lr_decay_patience': None,
    'dataset': None,
}

HIDDEN_RANGE = (16, 64)
BATCH_SIZE_RANGE = (8, 64)


def _require_range(name, value, low, high):
    if not low <= value <= high:
        raise ValueError('%s must lie in [%s, %s], got %r' % (name, low, high, value))


class ExperimentConfig(object):
    """
    Every knob of a clustering or classification experiment.

    ``None`` for ``max_epochs``, ``early_stop_patience``,
    ``lr_decay_patience`` and ``dataset`` selects the default of the mode;
    ``alpha_ramp_epochs`` defaults to half of ``max_epochs``.
    """
    def __init__(self, **values):
        unknown = set(values) - set(_DEFAULTS)
        if unknown:
            raise ValueError('Unknown configuration key(s): %s' % ', '.join(sorted(unknown)))

        merged = copy.deepcopy(_DEFAULTS)
        merged.update(copy.deepcopy(values))
        if merged['mode'] not in MODES:
            raise ValueError('Unknown mode "%s", expected one of: %s'
                             % (merged['mode'], ', '.join(MODES)))
        mode_defaults = _MODE_DEFAULTS[merged['mode']]
        for key, default in mode_defaults.items():
            if merged[key] is None:
                merged[key] = copy.deepcopy(default)
        if not isinstance(merged['dataset'], dict):
            raise ValueError('Dataset description must be a mapping, got %r' % (merged['dataset'],))
        # Dataset parameters without a kind refine the default dataset of the mode
        if 'kind' not in merged['dataset']:
            merged['dataset'] = dict(mode_defaults['dataset'], **merged['dataset'])
        if merged['alpha_ramp_epochs'] is None:
            merged['alpha_ramp_epochs'] = merged['max_epochs'] // 2

        self.mode = merged['mode']
        self.seeds = [int(seed) for seed in merged['seeds']]
        self.lr = float(merged['lr'])
        self.grad_clip = float(merged['grad_clip'])
        self.lr_decay_factor = float(merged['lr_decay_factor'])
        self.min_lr = float(merged['min_lr'])
        self.mu = float(merged['mu'])
        self.alpha2_start = float(merged['alpha2_start'])
        self.alpha2_floor = float(merged['alpha2_floor'])
        self.alpha_ramp_epochs = int(merged['alpha_ramp_epochs'])
        self.hidden = int(merged['hidden'])
        self.mlp_hidden = int(merged['mlp_hidden'])
        self.batch_size = int(merged['batch_size'])
        self.pool_ratio = float(merged['pool_ratio'])
        self.pooler = merged['pooler']
        self.num_clusters = None if merged['num_clusters'] is None else int(merged['num_clusters'])
        self.global_skip = bool(merged['global_skip'])
        self.motif_threshold = float(merged['motif_threshold'])
        self.log_every = int(merged['log_every'])
        self.max_epochs = int(merged['max_epochs'])
        self.early_stop_patience = int(merged['early_stop_patience'])
        self.lr_decay_patience = int(merged['lr_decay_patience'])
        self.dataset = dict(merged['dataset'])

        self._validate()

    def _validate(self):
        if not self.seeds:
            raise ValueError('At least one seed is needed')
        if self.lr <= 0 or self.grad_clip <= 0:
            raise ValueError('Learning rate and gradient clip must be positive')
        require_open_unit_interval(self.lr_decay_factor, 'Learning rate decay factor')
        if not 0 < self.min_lr <= self.lr:
            raise ValueError('Minimum learning rate must lie in (0, lr], got %r' % self.min_lr)
        if self.mu < 0:
            raise ValueError('mu must be non-negative, got %r' % self.mu)
        if not 0.0 <= self.alpha2_floor <= self.alpha2_start <= 1.0:
            raise ValueError('Expected 0 <= alpha2_floor <= alpha2_start <= 1')
        if self.alpha_ramp_epochs < 0:
            raise ValueError('alpha_ramp_epochs must be non-negative')
        _require_range('hidden', self.hidden, *HIDDEN_RANGE)
        _require_range('mlp_hidden', self.mlp_hidden, *HIDDEN_RANGE)
        _require_range('batch_size', self.batch_size, *BATCH_SIZE_RANGE)
        require_open_unit_interval(self.pool_ratio, 'Pooling ratio')
        if self.pooler not in POOLERS:
            raise ValueError('Unknown pooler "%s", expected one of: %s'
                             % (self.pooler, ', '.join(POOLERS)))
        if self.pooler == POOLER_NOPOOL and self.mode != MODE_CLASSIFY:
            raise ValueError('Pooler "%s" only applies to classification' % POOLER_NOPOOL)
        if self.num_clusters is not None and self.num_clusters < 2:
            raise ValueError('num_clusters must be at least 2, got %d' % self.num_clusters)
        if self.motif_threshold < 0:
            raise ValueError('motif_threshold must be non-negative')
        if self.log_every < 1:
            raise ValueError('log_every must be positive')
        if self.max_epochs < 1 or self.early_stop_patience < 1 or self.lr_decay_patience < 1:
            raise ValueError('Epoch counts and patiences must be positive')

    def to_mapping(self):
        return dict((key, copy.deepcopy(getattr(self, key))) for key in sorted(_DEFAULTS))

    def replace(self, **values):
        mapping = self.to_mapping()
        mapping.update(values)
        return ExperimentConfig(**mapping)

    def config_hash(self):
        """Stable digest of everything but the seed list."""
        mapping = self.to_mapping()
        del mapping['seeds']
        text = json.dumps(mapping, sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:12]

    def alpha_settled_epoch(self):
        """First epoch from which the motif weights of the loss no longer change."""
        if self.pooler in (POOLER_MINCUT, POOLER_RANDOM, POOLER_NOPOOL):
            return 0
        return self.alpha_schedule().ramp_epochs

    def alpha_schedule(self):
        if self.pooler == POOLER_HP1:
            return AlphaSchedule.constant(0.0)
        if self.pooler == POOLER_HP2:
            return AlphaSchedule.constant(1.0)
        return AlphaSchedule(self.alpha2_start, self.alpha2_floor, self.alpha_ramp_epochs)


def apply_overrides(mapping, overrides):
    """
    Applies ``(key, value)`` pairs; ``dataset.<name>`` addresses the
    nested dataset mapping.
    """
    mapping = copy.deepcopy(mapping)
    for key, value in overrides:
        if key.startswith('dataset.'):
            dataset = dict(mapping.get('dataset') or {})
            dataset[key[len('dataset.'):]] = value
            mapping['dataset'] = dataset
        elif '.' in key:
            raise ValueError('Only "dataset." keys may be dotted, got "%s"' % key)
        else:
            mapping[key] = value
    return mapping


def load_config_mapping(path):
    try:
        with open(path, 'r') as f:
            mapping = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise DataError('Config file %s is not well-formed: %s' % (path, e))
    if mapping is None:
        return {}
    if not isinstance(mapping, dict):
        raise DataError('Config file %s must hold a mapping at top level' % path)
    return mapping


def resolve_config(path=None, overrides=(), **forced):
    """File, then ``forced`` values from dedicated flags, then ``--set`` overrides."""
    mapping = load_config_mapping(path) if path else {}
    mapping.update((key, value) for key, value in forced.items() if value is not None)
    return ExperimentConfig(**apply_overrides(mapping, overrides))


def write_config(cfg, path):
    with open(path, 'w') as f:
        yaml.safe_dump(cfg.to_mapping(), f, default_flow_style=False)
