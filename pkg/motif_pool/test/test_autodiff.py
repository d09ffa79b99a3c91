# Licensed under AGPL v3 or later

from unittest import TestCase

import networkx as nx
import numpy as np
import scipy.sparse as sp

from motif_pool.autodiff import (
        Tape, add, cross_entropy_logits, elementwise_mul,
        frobenius_norm_columns, gradient_check, matmul, ratio_sum, relu, scale,
        softmax_rows, sparse_dense_matmul, sum_all,
        sym_normalize_dense, trace_ratio, transpose)
from motif_pool.datasets.base import from_networkx
from motif_pool.graph import sym_normalize
from motif_pool.losses import (
        loss_mc, loss_mc_combined, loss_mincut_ablation, loss_ortho, total_loss)
from motif_pool.models import GcnSkipParams, MlpParams, assignment_forward, gcn_skip_forward
from motif_pool.motifs import edge_adjacency, triangle_adjacency
from motif_pool.pooling import coarsen
from motif_pool.shared.errors import NumericalError, ShapeError

TOLERANCE = 1e-4


class TestTape(TestCase):
    def test_simple_gradient(self):
        tape = Tape()
        x = tape.parameter([[1.0, 2.0], [3.0, 4.0]])
        loss = sum_all(elementwise_mul(x, x))
        tape.backward(loss)
        self.assertEqual(loss.item(), 30.0)
        np.testing.assert_allclose(x.grad, [[2.0, 4.0], [6.0, 8.0]])

    def test_constants_get_no_gradient(self):
        tape = Tape()
        c = tape.constant([[1.0, 2.0]])
        x = tape.parameter([[3.0, 4.0]])
        tape.backward(sum_all(add(c, x)))
        self.assertIsNone(c.grad)
        np.testing.assert_allclose(x.grad, [[1.0, 1.0]])

    def test_backward_twice(self):
        tape = Tape()
        x = tape.parameter([[1.0]])
        tape.backward(scale(x, 2.0))
        with self.assertRaises(RuntimeError):
            tape.backward(scale(x, 2.0))
        tape.reset()
        self.assertEqual(len(tape), 0)
        self.assertEqual(tape.parameters(), [])

    def test_non_finite(self):
        tape = Tape()
        with self.assertRaises(NumericalError):
            tape.constant([[np.nan]])
        x = tape.parameter([[1e308]])
        with self.assertRaises(NumericalError):
            scale(x, 10.0)

    def test_shape_errors(self):
        tape = Tape()
        a = tape.parameter(np.ones((2, 3)))
        b = tape.parameter(np.ones((2, 3)))
        with self.assertRaises(ShapeError):
            matmul(a, b)
        with self.assertRaises(ShapeError):
            a.item()
        with self.assertRaises(ShapeError):
            tape.backward(a)

    def test_mixed_tapes(self):
        a = Tape().parameter([[1.0]])
        b = Tape().parameter([[1.0]])
        with self.assertRaises(ValueError):
            add(a, b)


class TestOperatorGradients(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(0)

    def test_elementary(self):
        rng = self.rng
        a = rng.normal(size=(4, 3))
        b = rng.normal(size=(3, 5))
        row = rng.normal(size=(1, 5))
        weights = rng.normal(size=(4, 5))
        sparse = sp.random(4, 4, density=0.5, random_state=1, format='csr')

        for name, build_loss, arrays in (
                ('matmul',
                 lambda tape, x, y: sum_all(elementwise_mul(matmul(x, y), tape.constant(weights))),
                 [a, b]),
                ('broadcast add',
                 lambda tape, x, y: sum_all(elementwise_mul(add(matmul(tape.constant(a), x), y),
                                                            tape.constant(weights))),
                 [b, row]),
                ('relu',
                 lambda tape, x: sum_all(elementwise_mul(relu(x), tape.constant(a))),
                 [rng.normal(size=(4, 3))]),
                ('sparse matmul',
                 lambda tape, x: sum_all(elementwise_mul(sparse_dense_matmul(sparse, x),
                                                         tape.constant(a))),
                 [rng.normal(size=(4, 3))]),
                ('softmax',
                 lambda tape, x: sum_all(elementwise_mul(softmax_rows(x), tape.constant(a))),
                 [rng.normal(size=(4, 3))]),
                ('transpose',
                 lambda tape, x: sum_all(elementwise_mul(transpose(x), tape.constant(b))),
                 [rng.normal(size=(5, 3))]),
                ('column norms',
                 lambda tape, x: sum_all(frobenius_norm_columns(x)),
                 [rng.normal(size=(4, 3))]),
                ('cross entropy',
                 lambda tape, x: cross_entropy_logits(x, [0, 2, 1, 1]),
                 [rng.normal(size=(4, 3))]),
                ):
            error = gradient_check(build_loss, arrays)
            self.assertLess(error, TOLERANCE, name)

    def test_trace_ratio(self):
        rng = self.rng
        numer = rng.normal(size=(3, 3))
        denom = rng.uniform(1.0, 2.0, size=(3, 3))
        error = gradient_check(lambda tape, n, d: trace_ratio(n, d), [numer, denom])
        self.assertLess(error, TOLERANCE)

    def test_ratio_sum(self):
        rng = self.rng
        numer = rng.normal(size=(1, 4))
        denom = rng.uniform(1.0, 2.0, size=(1, 4))
        error = gradient_check(lambda tape, n, d: ratio_sum(n, d), [numer, denom])
        self.assertLess(error, TOLERANCE)

    def test_clamped_denominators_pass_no_gradient(self):
        for op, numer, denom, g_numer, g_denom in (
                (trace_ratio, np.diag([0.5, 0.5]), np.diag([0.0, 2.0]),
                 np.diag([0.0, 0.5]), np.diag([0.0, -0.125])),
                (ratio_sum, [[0.5, 0.5]], [[0.0, 2.0]],
                 [[0.0, 0.5]], [[0.0, -0.125]]),
                ):
            tape = Tape()
            n = tape.parameter(numer)
            d = tape.parameter(denom)
            tape.backward(op(n, d))
            np.testing.assert_array_equal(n.grad, g_numer)
            np.testing.assert_array_equal(d.grad, g_denom)

    def test_sym_normalize_dense(self):
        rng = self.rng
        upper = np.triu(rng.uniform(0.1, 1.0, size=(5, 5)), k=1)
        weights = rng.normal(size=(5, 5))
        error = gradient_check(
                lambda tape, a: sum_all(elementwise_mul(sym_normalize_dense(a),
                                                        tape.constant(weights))),
                [upper + upper.T])
        self.assertLess(error, TOLERANCE)

    def test_cross_entropy_value(self):
        tape = Tape()
        logits = tape.constant([[0.0, 0.0], [0.0, 0.0]])
        self.assertAlmostEqual(cross_entropy_logits(logits, [0, 1]).item(), np.log(2.0), places=12)


class TestLossGradients(TestCase):
    def setUp(self):
        self.g = from_networkx(nx.gnp_random_graph(15, 0.35, seed=3))
        self.a_edge = edge_adjacency(self.g)
        self.a_tri = triangle_adjacency(self.g)
        self.logits = np.random.default_rng(1).normal(size=(15, 3))

    def test_losses_on_logits(self):
        a_edge, a_tri = self.a_edge, self.a_tri
        adj_norm = sym_normalize(self.g)
        for name, build_loss in (
                ('edge', lambda tape, z: loss_mc(softmax_rows(z), a_edge)),
                ('triangle', lambda tape, z: loss_mc(softmax_rows(z), a_tri)),
                ('combined', lambda tape, z: loss_mc_combined(softmax_rows(z), a_edge, a_tri,
                                                              0.3, 0.7)),
                ('ortho', lambda tape, z: loss_ortho(softmax_rows(z))),
                ('mincut', lambda tape, z: loss_mincut_ablation(softmax_rows(z), adj_norm)),
                ):
            error = gradient_check(build_loss, [self.logits])
            self.assertLess(error, TOLERANCE, name)

    def test_losses_on_assignment(self):
        a_edge, a_tri = self.a_edge, self.a_tri
        adj_norm = sym_normalize(self.g)
        s = np.random.default_rng(4).dirichlet(np.ones(3), size=15)
        for name, build_loss in (
                ('edge', lambda tape, x: loss_mc(x, a_edge)),
                ('triangle', lambda tape, x: loss_mc(x, a_tri)),
                ('ortho', lambda tape, x: loss_ortho(x)),
                ('mincut', lambda tape, x: loss_mincut_ablation(x, adj_norm)),
                ):
            error = gradient_check(build_loss, [s])
            self.assertLess(error, TOLERANCE, name)

    def test_end_to_end(self):
        g, a_edge, a_tri = self.g, self.a_edge, self.a_tri
        rng = np.random.default_rng(2)
        x = rng.normal(size=(g.n, 4))
        adj_norm = sym_normalize(g)
        gcn = GcnSkipParams.initialize(rng, 4, 6)
        mlp = MlpParams.initialize(rng, 6, [5], 3)

        def build_loss(tape, theta1, theta2, w1, b1, w2, b2):
            h = gcn_skip_forward(adj_norm, tape.constant(x), GcnSkipParams(theta1, theta2))
            s = assignment_forward(h, MlpParams([w1, w2], [b1, b2]))
            pooled = coarsen(g.adjacency, h, s)
            readout = sum_all(elementwise_mul(pooled.adj_pool, pooled.adj_pool))
            l_mc = loss_mc_combined(s, a_edge, a_tri, 0.5, 0.5)
            return add(total_loss(l_mc, loss_ortho(s), None, 1.0), scale(readout, 0.1))

        error = gradient_check(build_loss, gcn.arrays() + mlp.arrays())
        self.assertLess(error, TOLERANCE)
