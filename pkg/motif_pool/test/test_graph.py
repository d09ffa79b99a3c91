# Licensed under AGPL v3 or later

from unittest import TestCase

import numpy as np

from motif_pool.graph import (
        build_graph, connected_component_labels, degrees, disjoint_union,
        from_dense, inverse_sqrt_or_zero, sym_normalize)
from motif_pool.shared.errors import DataError


class TestBuildGraph(TestCase):
    def test_duplicates_and_self_loops(self):
        g = build_graph([(0, 1), (1, 0, 2.0), (2, 2), (1, 2)], 3)
        self.assertEqual(g.num_edges, 2)
        self.assertEqual(g.adjacency[0, 1], 3.0)
        self.assertEqual(g.adjacency[1, 0], 3.0)
        self.assertEqual(g.adjacency[2, 2], 0.0)
        self.assertEqual(list(g.edges()), [(0, 1, 3.0), (1, 2, 1.0)])

    def test_invalid(self):
        for edges, n in (
                ([(0, 3)], 3),
                ([(-1, 0)], 3),
                ([(0, 1, -1.0)], 2),
                ([(0, 1, 1.0, 5)], 2),
                ):
            with self.assertRaises(DataError):
                build_graph(edges, n)

    def test_asymmetric_dense(self):
        with self.assertRaises(DataError):
            from_dense([[0, 1], [0, 0]])

    def test_feature_rows_must_match(self):
        with self.assertRaises(DataError):
            build_graph([(0, 1)], 2, features=np.ones((3, 2)))

    def test_empty(self):
        g = build_graph([], 0)
        self.assertEqual(g.n, 0)
        self.assertEqual(g.num_edges, 0)


class TestNormalization(TestCase):
    def test_inverse_sqrt(self):
        for d, expected in (
                ([4.0, 0.0, 1.0], [0.5, 0.0, 1.0]),
                ([0.0], [0.0]),
                ):
            np.testing.assert_allclose(inverse_sqrt_or_zero(d), expected)

    def test_path_with_isolated_node(self):
        g = build_graph([(0, 1), (1, 2)], 4)
        np.testing.assert_allclose(degrees(g), [1, 2, 1, 0])
        expected = np.zeros((4, 4))
        expected[0, 1] = expected[1, 0] = 1 / np.sqrt(2)
        expected[1, 2] = expected[2, 1] = 1 / np.sqrt(2)
        np.testing.assert_allclose(sym_normalize(g).toarray(), expected)

    def test_normalized_is_symmetric(self):
        rng = np.random.default_rng(3)
        upper = np.triu(rng.random((8, 8)) < 0.4, k=1).astype(float)
        g = from_dense(upper + upper.T)
        a = sym_normalize(g).toarray()
        np.testing.assert_allclose(a, a.T)

    def test_against_dense_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(2, 51))
            weights = np.triu(rng.uniform(0.1, 3.0, size=(n, n)) * (rng.random((n, n)) < 0.2), k=1)
            dense = weights + weights.T
            g = from_dense(dense)
            d = dense.sum(axis=1)
            r = np.array([1.0 / np.sqrt(v) if v > 0 else 0.0 for v in d])
            expected = np.array([[r[i] * dense[i, j] * r[j] for j in range(n)] for i in range(n)])
            np.testing.assert_allclose(sym_normalize(g).toarray(), expected, rtol=0, atol=1e-12)


class TestDegrees(TestCase):
    def test_degree_sum_is_twice_total_weight(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(1, 40))
            edges = [(int(i), int(j), float(w)) for i, j, w in zip(
                rng.integers(0, n, size=3 * n), rng.integers(0, n, size=3 * n),
                rng.uniform(0.5, 2.0, size=3 * n))]
            g = build_graph(edges, n)
            self.assertAlmostEqual(degrees(g).sum(), 2.0 * g.total_weight(), places=9)
            self.assertAlmostEqual(g.total_weight(), sum(w for _i, _j, w in g.edges()), places=9)


class TestComposition(TestCase):
    def test_disjoint_union(self):
        a = build_graph([(0, 1)], 2, features=np.zeros((2, 1)))
        b = build_graph([(0, 1), (1, 2)], 3, features=np.ones((3, 1)))
        union = disjoint_union([a, b])
        self.assertEqual(union.n, 5)
        self.assertEqual(list(union.edges()), [(0, 1, 1.0), (2, 3, 1.0), (3, 4, 1.0)])
        np.testing.assert_allclose(union.features.ravel(), [0, 0, 1, 1, 1])

        labels = connected_component_labels(union)
        self.assertEqual(len(set(labels)), 2)
        self.assertEqual(labels[0], labels[1])
        self.assertNotEqual(labels[1], labels[2])
