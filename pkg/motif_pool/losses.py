# Licensed under AGPL v3 or later

"""
Unsupervised and joint objectives on a soft cluster assignment ``S``.
"""

import math

import numpy as np
import scipy.sparse as sp

from motif_pool.autodiff import (
        add, elementwise_mul, frobenius_norm_columns, matmul, ratio_sum, scale,
        sparse_dense_matmul, sum_all, trace_ratio)

_ALPHA_TOLERANCE = 1e-12


def _zero(s):
    return s.tape.constant(0.0)


def motif_association(s, a_m):
    """``(SᵀA_M S)_kk`` for every cluster, as a 1×K tensor."""
    weighted = elementwise_mul(s, sparse_dense_matmul(a_m.a_m, s))
    return matmul(s.tape.constant(np.ones((1, s.shape[0]))), weighted)


def soft_motif_volume(s, a_m):
    """
    ``Σ_i S_ik (D_M)_ii`` for every cluster, as a 1×K tensor.  Equals
    ``(SᵀD_M S)_kk`` for a one-hot ``S``.
    """
    return matmul(s.tape.constant(a_m.d_m.reshape(1, -1)), s)


def loss_mc(s, a_m):
    """
    Relaxed motif conductance ``-(1/K) Σ_k (SᵀA_M S)_kk / Σ_i S_ik (D_M)_ii``, in [-1, 0].

    A uniform assignment scores ``-1/K``; only a partition that cuts no
    motif reaches ``-1``.
    Defined as a constant 0 when the motif degree vector is identically zero.
    """
    if not a_m.d_m.any():
        return _zero(s)
    k = s.shape[1]
    return scale(ratio_sum(motif_association(s, a_m), soft_motif_volume(s, a_m)), -1.0 / k)


def loss_mc_combined(s, a_edge, a_tri, alpha1, alpha2):
    """``α₁ L_mc(S, A) + α₂ L_mc(S, A_M)``; a term with zero weight is skipped."""
    if alpha1 < 0 or alpha2 < 0 or abs(alpha1 + alpha2 - 1.0) > _ALPHA_TOLERANCE:
        raise ValueError('Motif weights must be non-negative and sum to 1, got %r and %r'
                         % (alpha1, alpha2))
    terms = []
    if alpha1 > 0:
        terms.append(scale(loss_mc(s, a_edge), alpha1))
    if alpha2 > 0:
        terms.append(scale(loss_mc(s, a_tri), alpha2))
    result = terms[0]
    for term in terms[1:]:
        result = add(result, term)
    return result


def loss_ortho(s):
    """``(√K − (1/√N) Σ_j ‖S_{*j}‖) / (√K − 1)``, in [0, 1]."""
    n, k = s.shape
    if k < 2:
        raise ValueError('Orthogonality loss needs at least 2 clusters, got %d' % k)
    root_k = math.sqrt(k)
    norm_sum = sum_all(frobenius_norm_columns(s))
    return add(scale(norm_sum, -1.0 / (math.sqrt(n) * (root_k - 1.0))),
               s.tape.constant(root_k / (root_k - 1.0)))


def normalized_degrees(adj_norm):
    """Row sums of the normalised adjacency (the diagonal of ``D̃``)."""
    return np.asarray(adj_norm.sum(axis=1), dtype=np.float64).ravel()


def loss_mincut_ablation(s, adj_norm, deg_norm=None):
    """
    Single global ratio ``-Tr(SᵀÃS) / Tr(SᵀD̃S)``.
    """
    if deg_norm is None:
        deg_norm = normalized_degrees(adj_norm)
    numer = sum_all(elementwise_mul(s, sparse_dense_matmul(sp.csr_matrix(adj_norm), s)))
    denom = sum_all(elementwise_mul(s, sparse_dense_matmul(sp.diags(deg_norm).tocsr(), s)))
    return scale(trace_ratio(numer, denom), -1.0)


def total_loss(l_mc, l_o, l_sup, mu):
    """``L_mc + μ L_o + L_sup``; missing terms (``None``) count as zero."""
    if mu < 0:
        raise ValueError('Orthogonality weight must be non-negative, got %r' % mu)
    terms = []
    if l_mc is not None:
        terms.append(l_mc)
    if l_o is not None and mu > 0:
        terms.append(scale(l_o, mu))
    if l_sup is not None:
        terms.append(l_sup)
    if not terms:
        raise ValueError('Total loss needs at least one term')
    result = terms[0]
    for term in terms[1:]:
        result = add(result, term)
    return result


class AlphaSchedule(object):
    """Linear ramp of the triangle weight α₂ from ``alpha2_start`` down to ``alpha2_floor``."""
    def __init__(self, alpha2_start=1.0, alpha2_floor=0.5, ramp_epochs=250):
        if not 0.0 <= alpha2_floor <= alpha2_start <= 1.0:
            raise ValueError('Expected 0 <= floor <= start <= 1, got floor=%r start=%r'
                             % (alpha2_floor, alpha2_start))
        if ramp_epochs < 0:
            raise ValueError('Ramp length must be non-negative, got %r' % ramp_epochs)
        self.alpha2_start = float(alpha2_start)
        self.alpha2_floor = float(alpha2_floor)
        self.ramp_epochs = int(ramp_epochs)

    @classmethod
    def constant(clazz, alpha2):
        return clazz(alpha2, alpha2, 0)


def alpha_at(schedule, epoch):
    if epoch < 0:
        raise ValueError('Epoch must be non-negative, got %d' % epoch)
    if schedule.ramp_epochs == 0:
        alpha2 = schedule.alpha2_floor
    else:
        step = (schedule.alpha2_start - schedule.alpha2_floor) / schedule.ramp_epochs
        alpha2 = max(schedule.alpha2_floor, schedule.alpha2_start - epoch * step)
    return 1.0 - alpha2, alpha2
