# Licensed under AGPL v3 or later

from unittest import TestCase

import numpy as np
import scipy.sparse as sp

from motif_pool.autodiff import Tape
from motif_pool.graph import build_graph, sym_normalize
from motif_pool.models import (
        GcnSkipParams, MlpParams, assignment_forward, gcn_skip_forward,
        glorot_uniform, hard_labels, is_row_stochastic, mlp_forward)
from motif_pool.shared.errors import ShapeError


class TestParameters(TestCase):
    def test_glorot_bounds(self):
        w = glorot_uniform(np.random.default_rng(0), 30, 20)
        self.assertEqual(w.shape, (30, 20))
        self.assertLessEqual(np.abs(w).max(), np.sqrt(6.0 / 50))

    def test_mlp_shapes(self):
        mlp = MlpParams.initialize(np.random.default_rng(0), 8, [16, 4], 3)
        self.assertEqual([w.shape for w in mlp.weights], [(8, 16), (16, 4), (4, 3)])
        self.assertEqual([b.shape for b in mlp.biases], [(1, 16), (1, 4), (1, 3)])
        self.assertEqual(mlp.output_width, 3)
        self.assertEqual(len(mlp.arrays()), 6)

    def test_bind_follows_array_order(self):
        mlp = MlpParams.initialize(np.random.default_rng(0), 4, [5], 2)
        tape = Tape()
        mlp.bind(tape)
        for array, tensor in zip(mlp.arrays(), tape.parameters()):
            np.testing.assert_array_equal(array, tensor.data)

    def test_invalid_shapes(self):
        rng = np.random.default_rng(0)
        with self.assertRaises(ShapeError):
            GcnSkipParams(np.zeros((3, 4)), np.zeros((3, 5)))
        with self.assertRaises(ShapeError):
            MlpParams([np.zeros((3, 4)), np.zeros((5, 2))], [np.zeros((1, 4)), np.zeros((1, 2))])
        with self.assertRaises(ShapeError):
            MlpParams([np.zeros((3, 4))], [])

        gcn = GcnSkipParams.initialize(rng, 3, 4)
        tape = Tape()
        with self.assertRaises(ShapeError):
            gcn_skip_forward(sp.eye(2, format='csr'), tape.constant(np.ones((2, 5))), gcn)


class TestForward(TestCase):
    def test_gcn_skip_by_hand(self):
        g = build_graph([(0, 1)], 2)
        x = np.array([[1.0, 0.0], [0.0, 2.0]])
        theta1 = np.array([[1.0], [1.0]])
        theta2 = np.array([[1.0], [-1.0]])
        tape = Tape()
        h = gcn_skip_forward(sym_normalize(g), tape.constant(x),
                             GcnSkipParams(tape.constant(theta1), tape.constant(theta2)))
        # Node 0: Ã X Θ₁ = 2, X Θ₂ = 1; node 1: Ã X Θ₁ = 1, X Θ₂ = -2
        np.testing.assert_allclose(h.data, [[3.0], [0.0]])

    def test_mlp_last_layer_is_linear(self):
        tape = Tape()
        p = MlpParams([tape.constant([[-1.0]])], [tape.constant([[-2.0]])])
        np.testing.assert_allclose(mlp_forward(tape.constant([[3.0]]), p).data, [[-5.0]])

    def test_assignment_is_row_stochastic(self):
        rng = np.random.default_rng(1)
        mlp = MlpParams.initialize(rng, 6, [8], 4)
        tape = Tape()
        s = assignment_forward(tape.constant(rng.normal(size=(10, 6))), mlp.bind(tape))
        self.assertEqual(s.shape, (10, 4))
        self.assertTrue(is_row_stochastic(s))

    def test_assignment_needs_two_clusters(self):
        mlp = MlpParams.initialize(np.random.default_rng(0), 3, [4], 1)
        tape = Tape()
        with self.assertRaises(ShapeError):
            assignment_forward(tape.constant(np.ones((2, 3))), mlp.bind(tape))

    def test_hard_labels(self):
        for s, expected in (
                ([[0.2, 0.8], [0.9, 0.1]], [1, 0]),
                ([[0.5, 0.5]], [0]),
                ):
            np.testing.assert_array_equal(hard_labels(np.array(s)), expected)

    def test_row_stochastic_check(self):
        for s, expected in (
                ([[0.5, 0.5], [1.0, 0.0]], True),
                ([[0.6, 0.6]], False),
                ([[1.5, -0.5]], False),
                ):
            self.assertEqual(is_row_stochastic(np.array(s)), expected)
