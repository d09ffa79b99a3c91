# Licensed under AGPL v3 or later

"""
Adam with global gradient-norm clipping, plus plateau bookkeeping for
learning-rate decay, early stopping and best-checkpoint restore.
"""

import numpy as np

from motif_pool.shared.errors import ShapeError

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8


def global_norm(grads):
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads)))


def clip_gradients(grads, max_norm):
    """Returns the (possibly rescaled) gradients and their norm before clipping."""
    norm = global_norm(grads)
    if norm <= max_norm or norm == 0.0:
        return list(grads), norm
    factor = max_norm / norm
    return [g * factor for g in grads], norm


class AdamState(object):
    def __init__(self, params, lr):
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0
        self.lr = float(lr)


def optimizer_step(params, grads, state, cfg):
    """
    Updates ``params`` in place and returns them.

    ``cfg`` contributes ``grad_clip``; the learning rate lives in ``state``
    so that plateau decay can lower it between steps.
    """
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ShapeError('Expected %d gradients, got %d' % (len(params), len(grads)))
    for p, g in zip(params, grads):
        if p.shape != g.shape:
            raise ShapeError('Gradient of shape %s does not fit parameter of shape %s'
                             % (g.shape, p.shape))

    grads, _norm = clip_gradients(grads, cfg.grad_clip)
    state.t += 1
    correction1 = 1.0 - ADAM_BETA1 ** state.t
    correction2 = 1.0 - ADAM_BETA2 ** state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= ADAM_BETA1
        m += (1.0 - ADAM_BETA1) * g
        v *= ADAM_BETA2
        v += (1.0 - ADAM_BETA2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        p -= state.lr * m_hat / (np.sqrt(v_hat) + ADAM_EPSILON)
    return params


class PlateauTracker(object):
    """
    Tracks the best value of a metric, snapshots the parameters that
    produced it, and says when to halve the learning rate or stop.

    ``key`` maps an observation to a tuple compared lexicographically;
    smaller is better.
    """
    def __init__(self, early_stop_patience, lr_decay_patience, lr_decay_factor, min_lr):
        self._early_stop_patience = early_stop_patience
        self._lr_decay_patience = lr_decay_patience
        self._lr_decay_factor = lr_decay_factor
        self._min_lr = min_lr
        self.best_key = None
        self.best_epoch = None
        self._best_params = None
        self._since_best = 0
        self._since_decay = 0

    def observe(self, epoch, key, params):
        """Returns ``True`` if ``key`` is a new best."""
        if self.best_key is None or key < self.best_key:
            self.best_key = key
            self.best_epoch = epoch
            self._best_params = [p.copy() for p in params]
            self._since_best = 0
            self._since_decay = 0
            return True
        self._since_best += 1
        self._since_decay += 1
        return False

    def maybe_decay(self, state):
        """Halves ``state.lr`` (not below the floor) after a long enough plateau."""
        if self._since_decay < self._lr_decay_patience or state.lr <= self._min_lr:
            return False
        state.lr = max(self._min_lr, state.lr * self._lr_decay_factor)
        self._since_decay = 0
        return True

    def should_stop(self):
        return self._since_best >= self._early_stop_patience

    def restore(self, params):
        if self._best_params is None:
            return
        for p, best in zip(params, self._best_params):
            p[...] = best
