# Licensed under AGPL v3 or later

"""
Dense reverse-mode differentiation on 2-D float64 arrays.

A ``Tape`` records every operation in creation order, which is a
topological order, so ``backward`` walks it once in reverse.  Sparse
matrices only ever enter as constant left operands of
``sparse_dense_matmul``.
"""

import numpy as np
import scipy.sparse as sp

from motif_pool.shared.errors import NumericalError, ShapeError

TRACE_RATIO_EPSILON = 1e-10


class Tensor(object):
    def __init__(self, tape, data, parents=(), backward=None, requires_grad=False, op='leaf'):
        self.tape = tape
        self.data = data
        self.parents = parents
        self.requires_grad = requires_grad
        self.grad = np.zeros_like(data) if requires_grad and not parents else None
        self.op = op
        self.node_id = None
        self._backward = backward

    @property
    def shape(self):
        return self.data.shape

    def item(self):
        if self.data.shape != (1, 1):
            raise ShapeError('Tensor of shape %s is not a scalar' % (self.data.shape,))
        return float(self.data[0, 0])

    def __repr__(self):
        return 'Tensor(op=%r, shape=%s)' % (self.op, self.data.shape)


def _as_matrix(data, what):
    data = np.array(data, dtype=np.float64)
    if data.ndim == 0:
        data = data.reshape(1, 1)
    elif data.ndim == 1:
        data = data.reshape(1, -1)
    elif data.ndim != 2:
        raise ShapeError('%s must be at most 2-dimensional, got shape %s' % (what, data.shape))
    return data


def _require_finite(data, op):
    if not np.isfinite(data).all():
        raise NumericalError('Non-finite value produced by operation "%s"' % op)


class Tape(object):
    def __init__(self):
        self._nodes = []
        self._parameters = []
        self._backward_done = False

    def __len__(self):
        return len(self._nodes)

    def constant(self, data):
        data = _as_matrix(data, 'Constant')
        _require_finite(data, 'constant')
        return self._register(Tensor(self, data, op='constant'))

    def parameter(self, data):
        data = _as_matrix(data, 'Parameter')
        _require_finite(data, 'parameter')
        tensor = self._register(Tensor(self, data, requires_grad=True, op='parameter'))
        self._parameters.append(tensor)
        return tensor

    def parameters(self):
        return list(self._parameters)

    def _register(self, tensor):
        tensor.node_id = len(self._nodes)
        self._nodes.append(tensor)
        return tensor

    def record(self, op, data, parents, backward):
        _require_finite(data, op)
        requires_grad = any(p.requires_grad for p in parents)
        return self._register(Tensor(self, data, parents, backward, requires_grad, op))

    def backward(self, loss):
        if loss.tape is not self:
            raise ValueError('Loss tensor was recorded on a different tape')
        if loss.data.shape != (1, 1):
            raise ShapeError('Loss must be a scalar, got shape %s' % (loss.data.shape,))
        if self._backward_done:
            raise RuntimeError('Backward pass already ran on this tape; call reset() first')
        self._backward_done = True

        if not loss.requires_grad:
            return

        loss.grad = np.ones((1, 1))
        for node in reversed(self._nodes[:loss.node_id + 1]):
            if node.grad is None or node._backward is None:
                continue
            parent_grads = node._backward(node.grad)
            for parent, parent_grad in zip(node.parents, parent_grads):
                if not parent.requires_grad or parent_grad is None:
                    continue
                if parent.grad is None:
                    parent.grad = np.array(parent_grad, dtype=np.float64)
                else:
                    parent.grad = parent.grad + parent_grad

    def reset(self):
        self._nodes = []
        self._parameters = []
        self._backward_done = False


def _tape_of(*tensors):
    tape = tensors[0].tape
    for t in tensors[1:]:
        if t.tape is not tape:
            raise ValueError('Cannot combine tensors recorded on different tapes')
    return tape


def _require_shape(condition, op, *shapes):
    if not condition:
        raise ShapeError('Shape mismatch in "%s": %s' % (op, ', '.join(str(s) for s in shapes)))


def matmul(a, b):
    _require_shape(a.shape[1] == b.shape[0], 'matmul', a.shape, b.shape)

    def backward(g):
        return g @ b.data.T, a.data.T @ g

    return _tape_of(a, b).record('matmul', a.data @ b.data, (a, b), backward)


def sparse_dense_matmul(matrix, b):
    """``matrix @ b`` with ``matrix`` a constant (sparse or dense) array."""
    _require_shape(matrix.shape[1] == b.shape[0], 'sparse_dense_matmul', matrix.shape, b.shape)
    product = matrix @ b.data
    if sp.issparse(product):
        product = product.toarray()

    def backward(g):
        return (np.asarray(matrix.T @ g),)

    return b.tape.record('sparse_dense_matmul', np.asarray(product, dtype=np.float64), (b,), backward)


def _reduce_to(g, shape):
    if g.shape == shape:
        return g
    if shape == (1, 1):
        return g.sum().reshape(1, 1)
    if shape[0] == 1:
        return g.sum(axis=0, keepdims=True)
    return g.sum(axis=1, keepdims=True)


def add(a, b):
    """Same-shape sum; ``b`` may also be a 1×C row or a 1×1 scalar broadcast over ``a``."""
    _require_shape(a.shape == b.shape
                   or b.shape == (1, 1)
                   or (b.shape[0] == 1 and b.shape[1] == a.shape[1]),
                   'add', a.shape, b.shape)

    def backward(g):
        return g, _reduce_to(g, b.shape)

    return _tape_of(a, b).record('add', a.data + b.data, (a, b), backward)


def scale(a, factor):
    factor = float(factor)

    def backward(g):
        return (factor * g,)

    return a.tape.record('scale', factor * a.data, (a,), backward)


def elementwise_mul(a, b):
    _require_shape(a.shape == b.shape, 'elementwise_mul', a.shape, b.shape)

    def backward(g):
        return g * b.data, g * a.data

    return _tape_of(a, b).record('elementwise_mul', a.data * b.data, (a, b), backward)


def relu(a):
    mask = a.data > 0

    def backward(g):
        return (g * mask,)

    return a.tape.record('relu', np.where(mask, a.data, 0.0), (a,), backward)


def softmax_rows(a):
    shifted = a.data - a.data.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    y = exp / exp.sum(axis=1, keepdims=True)

    def backward(g):
        return (y * (g - (g * y).sum(axis=1, keepdims=True)),)

    return a.tape.record('softmax_rows', y, (a,), backward)


def transpose(a):
    def backward(g):
        return (g.T,)

    return a.tape.record('transpose', a.data.T.copy(), (a,), backward)


def _guarded_ratio(n_values, d_values, epsilon):
    """
    ``Σ n / max(d, ε)`` and the factors of its gradient.  Entries whose
    denominator is clamped are treated as constants: both partial
    derivatives are zero there.
    """
    clamped = np.maximum(d_values, epsilon)
    value = np.array([[np.sum(n_values / clamped)]])
    active = d_values > epsilon
    d_numer = np.where(active, 1.0 / clamped, 0.0)
    d_denom = np.where(active, -n_values / clamped ** 2, 0.0)
    return value, d_numer, d_denom


def trace_ratio(numer, denom, epsilon=TRACE_RATIO_EPSILON):
    """
    ``Σ_k numer_kk / max(denom_kk, ε)`` as a 1×1 tensor; off-diagonal
    entries of both operands are ignored.
    """
    _require_shape(numer.shape == denom.shape and numer.shape[0] == numer.shape[1],
                   'trace_ratio', numer.shape, denom.shape)
    value, d_numer, d_denom = _guarded_ratio(np.diag(numer.data), np.diag(denom.data), epsilon)

    def backward(g):
        scalar = g[0, 0]
        return np.diag(scalar * d_numer), np.diag(scalar * d_denom)

    return _tape_of(numer, denom).record('trace_ratio', value, (numer, denom), backward)


def ratio_sum(numer, denom, epsilon=TRACE_RATIO_EPSILON):
    """``Σ numer / max(denom, ε)`` over two tensors of one shape, as a 1×1 tensor."""
    _require_shape(numer.shape == denom.shape, 'ratio_sum', numer.shape, denom.shape)
    value, d_numer, d_denom = _guarded_ratio(numer.data, denom.data, epsilon)

    def backward(g):
        scalar = g[0, 0]
        return scalar * d_numer, scalar * d_denom

    return _tape_of(numer, denom).record('ratio_sum', value, (numer, denom), backward)


def frobenius_norm_columns(a):
    """Euclidean norm of every column, as a 1×C tensor."""
    norms = np.sqrt((a.data ** 2).sum(axis=0, keepdims=True))

    def backward(g):
        safe = np.where(norms > 0, norms, 1.0)
        return (np.where(norms > 0, g * a.data / safe, 0.0),)

    return a.tape.record('frobenius_norm_columns', norms, (a,), backward)


def sum_all(a):
    def backward(g):
        return (np.full(a.shape, g[0, 0]),)

    return a.tape.record('sum', np.array([[a.data.sum()]]), (a,), backward)


def cross_entropy_logits(logits, labels):
    """Mean cross entropy of B×C logits against B integer labels."""
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    _require_shape(labels.size == logits.shape[0], 'cross_entropy_logits',
                   logits.shape, labels.shape)
    batch = logits.shape[0]
    shifted = logits.data - logits.data.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_norm
    value = np.array([[-log_probs[np.arange(batch), labels].mean()]])

    def backward(g):
        grad = np.exp(log_probs)
        grad[np.arange(batch), labels] -= 1.0
        return (g[0, 0] * grad / batch,)

    return logits.tape.record('cross_entropy_logits', value, (logits,), backward)


def sym_normalize_dense(a):
    """
    ``D^{-1/2} A D^{-1/2}`` of a dense square tensor with ``D = diag(A 1)``;
    rows and columns with zero degree stay zero.
    """
    _require_shape(a.shape[0] == a.shape[1], 'sym_normalize_dense', a.shape)
    d = a.data.sum(axis=1)
    positive = d > 0
    r = np.zeros_like(d)
    r[positive] = 1.0 / np.sqrt(d[positive])
    value = a.data * np.outer(r, r)

    def backward(g):
        g_r = (g * a.data) @ r + (g * a.data).T @ r
        g_d = -0.5 * g_r * r ** 3
        return (g * np.outer(r, r) + g_d[:, None],)

    return a.tape.record('sym_normalize_dense', value, (a,), backward)


def finite_difference_gradient(function, arrays, index, step=1e-5):
    """
    Central-difference gradient of ``function(*arrays)`` (a float) with
    respect to ``arrays[index]``.
    """
    arrays = [np.array(a, dtype=np.float64) for a in arrays]
    target = arrays[index]
    grad = np.zeros_like(target)
    for position in np.ndindex(*target.shape):
        original = target[position]
        target[position] = original + step
        plus = function(*arrays)
        target[position] = original - step
        minus = function(*arrays)
        target[position] = original
        grad[position] = (plus - minus) / (2.0 * step)
    return grad


def gradient_check(build_loss, arrays, step=1e-5):
    """
    Compares analytic and finite-difference gradients of
    ``build_loss(tape, *parameters)`` for every array in ``arrays``.

    Returns the largest relative error: max-norm of the difference over
    entries whose magnitude exceeds 1e-8, relative to the max-norm of the
    finite-difference gradient.
    """
    tape = Tape()
    parameters = [tape.parameter(a) for a in arrays]
    loss = build_loss(tape, *parameters)
    tape.backward(loss)

    def evaluate(*values):
        fresh = Tape()
        return build_loss(fresh, *[fresh.parameter(v) for v in values]).item()

    worst = 0.0
    for index, parameter in enumerate(parameters):
        numeric = finite_difference_gradient(evaluate, arrays, index, step)
        analytic = parameter.grad
        significant = np.maximum(np.abs(numeric), np.abs(analytic)) > 1e-8
        if not significant.any():
            continue
        difference = np.abs(numeric - analytic)[significant].max()
        worst = max(worst, difference / max(np.abs(numeric).max(), 1e-8))
    return worst
