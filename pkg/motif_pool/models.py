# Licensed under AGPL v3 or later

"""
GCN with skip connection and MLP assignment head.

Parameter containers hold plain numpy arrays between steps; ``bind(tape)``
registers them on a tape and returns a container of the same shape whose
entries are tensors.  ``arrays()`` lists the arrays in a fixed order that
the optimizer and checkpoints rely on.
"""

import numpy as np
import scipy.sparse as sp

from motif_pool.autodiff import (
        Tensor, add, matmul, relu, softmax_rows, sparse_dense_matmul)
from motif_pool.shared.errors import ShapeError

DEFAULT_MLP_HIDDEN = (32,)


def glorot_uniform(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class GcnSkipParams(object):
    def __init__(self, theta1, theta2):
        if theta1.shape != theta2.shape:
            raise ShapeError('Skip weights must match: %s vs %s' % (theta1.shape, theta2.shape))
        self.theta1 = theta1
        self.theta2 = theta2

    @classmethod
    def initialize(clazz, rng, f_in, f_out):
        return clazz(glorot_uniform(rng, f_in, f_out), glorot_uniform(rng, f_in, f_out))

    def arrays(self):
        return [self.theta1, self.theta2]

    def bind(self, tape):
        return GcnSkipParams(tape.parameter(self.theta1), tape.parameter(self.theta2))


class MlpParams(object):
    def __init__(self, weights, biases):
        if len(weights) != len(biases) or not weights:
            raise ShapeError('An MLP needs one bias per weight matrix')
        for w, w_next in zip(weights, weights[1:]):
            if w.shape[1] != w_next.shape[0]:
                raise ShapeError('MLP layer shapes do not chain: %s then %s'
                                 % (w.shape, w_next.shape))
        self.weights = weights
        self.biases = biases

    @classmethod
    def initialize(clazz, rng, f_in, hidden, f_out):
        widths = [f_in] + list(hidden) + [f_out]
        weights = [glorot_uniform(rng, a, b) for a, b in zip(widths, widths[1:])]
        biases = [np.zeros((1, b)) for b in widths[1:]]
        return clazz(weights, biases)

    @property
    def output_width(self):
        return self.weights[-1].shape[1]

    def arrays(self):
        result = []
        for w, b in zip(self.weights, self.biases):
            result += [w, b]
        return result

    def bind(self, tape):
        # Registration order must follow arrays()
        weights, biases = [], []
        for w, b in zip(self.weights, self.biases):
            weights.append(tape.parameter(w))
            biases.append(tape.parameter(b))
        return MlpParams(weights, biases)


def propagate(adjacency, x):
    """``adjacency @ x`` for a constant (sparse) or taped (dense) adjacency."""
    if isinstance(adjacency, Tensor):
        return matmul(adjacency, x)
    if not sp.issparse(adjacency):
        adjacency = sp.csr_matrix(adjacency)
    return sparse_dense_matmul(adjacency, x)


def gcn_skip_forward(adj_norm, x, p):
    """``ReLU(Ã X Θ₁ + X Θ₂)``"""
    if x.shape[1] != p.theta1.shape[0]:
        raise ShapeError('Features of width %d do not fit weights of shape %s'
                         % (x.shape[1], p.theta1.shape))
    return relu(add(matmul(propagate(adj_norm, x), p.theta1), matmul(x, p.theta2)))


def mlp_forward(x, p):
    """Dense layers with ReLU in between; the last layer stays linear."""
    h = x
    last = len(p.weights) - 1
    for index, (w, b) in enumerate(zip(p.weights, p.biases)):
        h = add(matmul(h, w), b)
        if index < last:
            h = relu(h)
    return h


def assignment_forward(x, p):
    """Row-wise softmax over the MLP output: the soft cluster assignment ``S``."""
    if p.output_width < 2:
        raise ShapeError('Cluster assignment needs at least 2 clusters, got %d' % p.output_width)
    return softmax_rows(mlp_forward(x, p))


def hard_labels(s):
    """Cluster of every node: argmax of its row, ties to the lowest index."""
    data = s.data if isinstance(s, Tensor) else np.asarray(s)
    return np.argmax(data, axis=1)


def is_row_stochastic(s, tolerance=1e-9):
    data = s.data if isinstance(s, Tensor) else np.asarray(s)
    return bool(np.all(data >= 0.0) and np.all(data <= 1.0)
                and np.allclose(data.sum(axis=1), 1.0, atol=tolerance, rtol=0.0))
