# Licensed under AGPL v3 or later

import os
import shutil
import tempfile
from textwrap import dedent
from unittest import TestCase

import numpy as np

from motif_pool.datasets import (
        KIND_EDGE_LIST, KIND_KARATE, KIND_TU, load_graph_dataset, load_node_dataset)
from motif_pool.datasets.base import LabeledGraphSet, stratified_split
from motif_pool.datasets.edge_list import read_edge_list, write_edge_list
from motif_pool.datasets.synthetic import KIND_GC, KIND_SYN3, gen_gc_synthetic
from motif_pool.datasets.tu import load_tu_dataset, write_tu_dataset
from motif_pool.graph import build_graph
from motif_pool.shared.errors import DataError


class _TempDirTestCase(TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def write(self, filename, content):
        path = os.path.join(self.directory, filename)
        with open(path, 'w') as f:
            f.write(dedent(content))
        return path


class TestEdgeList(_TempDirTestCase):
    def test_read(self):
        path = self.write('g.edges', """\
                # a comment
                0 1
                1 2 2.5   # trailing comment

                2 0
                """)
        g = read_edge_list(path)
        self.assertEqual(g.n, 3)
        self.assertEqual(list(g.edges()), [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 2.5)])

    def test_sidecars_fix_node_count(self):
        path = self.write('g.edges', '0 1\n')
        labels = self.write('labels.txt', '0\n0\n1\n1\n')
        features = self.write('features.csv', '1,2\n3,4\n5,6\n7,8\n')
        g = read_edge_list(path, features_path=features, labels_path=labels)
        self.assertEqual(g.n, 4)
        np.testing.assert_array_equal(g.node_labels, [0, 0, 1, 1])
        np.testing.assert_allclose(g.features[3], [7.0, 8.0])

    def test_malformed(self):
        for content, expected_line in (
                ('0 1\n0\n', 2),
                ('0 1\nx 2\n', 2),
                ('0 1 1.0 7\n', 1),
                ):
            path = self.write('bad.edges', content)
            with self.assertRaises(DataError) as context:
                read_edge_list(path)
            self.assertIn('%s:%d:' % (path, expected_line), str(context.exception))

    def test_write_then_read(self):
        g = build_graph([(0, 1), (1, 2, 0.25), (2, 3)], 5,
                        features=np.arange(10, dtype=float).reshape(5, 2) / 3.0,
                        node_labels=[0, 1, 0, 1, 1])
        paths = [os.path.join(self.directory, name)
                 for name in ('g.edges', 'features.csv', 'labels.txt')]
        write_edge_list(g, *paths)
        loaded = read_edge_list(paths[0], features_path=paths[1], labels_path=paths[2])
        self.assertEqual(loaded.n, 5)
        self.assertEqual(list(loaded.edges()), list(g.edges()))
        np.testing.assert_array_equal(loaded.features, g.features)
        np.testing.assert_array_equal(loaded.node_labels, g.node_labels)


def _tu_fixture(test_case, name='TOY'):
    """Ten graphs: even ones are triangles, odd ones are paths of three nodes."""
    adjacency, indicator, labels = [], [], []
    offset = 0
    for k in range(10):
        edges = [(0, 1), (1, 2), (0, 2)] if k % 2 == 0 else [(0, 1), (1, 2)]
        for i, j in edges:
            adjacency.append('%d, %d' % (offset + i + 1, offset + j + 1))
            adjacency.append('%d, %d' % (offset + j + 1, offset + i + 1))
        indicator += [str(k + 1)] * 3
        labels.append('1' if k % 2 == 0 else '-1')
        offset += 3
    test_case.write(name + '_A.txt', '\n'.join(adjacency) + '\n')
    test_case.write(name + '_graph_indicator.txt', '\n'.join(indicator) + '\n')
    test_case.write(name + '_graph_labels.txt', '\n'.join(labels) + '\n')


class TestTuFormat(_TempDirTestCase):
    def test_load(self):
        _tu_fixture(self)
        data = load_tu_dataset(self.directory)
        self.assertEqual(data.name, 'TOY')
        self.assertEqual(len(data), 10)
        self.assertEqual(data.num_classes, 2)
        self.assertEqual(data.num_features, 1)
        # Labels are remapped in sorted order: -1 becomes 0, 1 becomes 1
        np.testing.assert_array_equal(data.labels(), [1, 0] * 5)
        self.assertEqual(data.graphs[0].num_edges, 3)
        self.assertEqual(data.graphs[1].num_edges, 2)
        self.assertEqual([len(part) for part in data.split], [8, 1, 1])

    def test_node_labels_become_one_hot(self):
        _tu_fixture(self)
        self.write('TOY_node_labels.txt', '\n'.join(['3', '5', '3'] * 10) + '\n')
        data = load_tu_dataset(self.directory, 'TOY')
        self.assertEqual(data.num_features, 2)
        np.testing.assert_array_equal(data.graphs[0].features, [[1, 0], [0, 1], [1, 0]])

    def test_inconsistent_files(self):
        for filename, content in (
                ('TOY_graph_labels.txt', '1\n-1\n'),
                ('TOY_A.txt', '1, 4\n4, 1\n'),
                ('TOY_A.txt', '1, 31\n'),
                ('TOY_graph_indicator.txt', '2\n1\n'),
                ):
            _tu_fixture(self)
            self.write(filename, content)
            with self.assertRaises(DataError):
                load_tu_dataset(self.directory, 'TOY')

    def test_missing_dataset(self):
        with self.assertRaises(DataError):
            load_tu_dataset(self.directory)

    def test_write_then_read(self):
        data = gen_gc_synthetic(n_graphs=20, seed=3, min_nodes=12, max_nodes=14)
        write_tu_dataset(data, self.directory, 'GC')
        loaded = load_tu_dataset(self.directory, 'GC')
        np.testing.assert_array_equal(loaded.labels(), data.labels())
        for original, copy in zip(data.graphs, loaded.graphs):
            self.assertEqual(list(copy.edges()), list(original.edges()))
            np.testing.assert_array_equal(copy.features, original.features)


class TestSplits(TestCase):
    def test_stratified(self):
        labels = np.repeat([0, 1], 50)
        train, val, test = stratified_split(labels, seed=0)
        self.assertEqual((len(train), len(val), len(test)), (80, 10, 10))
        self.assertEqual(sorted(train + val + test), list(range(100)))
        np.testing.assert_array_equal(np.bincount(labels[val]), [5, 5])
        np.testing.assert_array_equal(np.bincount(labels[test]), [5, 5])

    def test_seeded(self):
        labels = np.repeat([0, 1, 2], 20)
        self.assertEqual(stratified_split(labels, seed=4), stratified_split(labels, seed=4))
        self.assertNotEqual(stratified_split(labels, seed=4), stratified_split(labels, seed=5))

    def test_too_small(self):
        with self.assertRaises(DataError):
            stratified_split([0, 1, 0, 1], seed=0)

    def test_graph_set_validation(self):
        with self.assertRaises(DataError):
            LabeledGraphSet([])
        with self.assertRaises(DataError):
            LabeledGraphSet([build_graph([(0, 1)], 2, features=np.ones((2, 1)))])
        with self.assertRaises(DataError):
            LabeledGraphSet([build_graph([(0, 1)], 2, features=np.ones((2, 1)), graph_label=0),
                             build_graph([(0, 1)], 2, features=np.ones((2, 3)), graph_label=1)],
                            split=([0], [1], []))


class TestDatasetMappings(_TempDirTestCase):
    def test_node_datasets(self):
        self.assertEqual(load_node_dataset({'kind': KIND_KARATE}).n, 34)
        g = load_node_dataset({'kind': KIND_SYN3, 'n': 40, 'k': 2}, default_seed=1)
        self.assertEqual(g.n, 40)

        path = self.write('g.edges', '0 1\n1 2\n')
        g = load_node_dataset({'kind': KIND_EDGE_LIST, 'path': path, 'n': 4})
        self.assertEqual(g.n, 4)

    def test_graph_datasets(self):
        data = load_graph_dataset({'kind': KIND_GC, 'n_graphs': 20, 'max_nodes': 14})
        self.assertEqual(len(data), 20)
        _tu_fixture(self)
        self.assertEqual(len(load_graph_dataset({'kind': KIND_TU, 'path': self.directory})), 10)

    def test_invalid(self):
        for loader, mapping in (
                (load_node_dataset, {}),
                (load_node_dataset, {'kind': 'cora'}),
                (load_node_dataset, {'kind': KIND_KARATE, 'seed': 1}),
                (load_node_dataset, {'kind': KIND_EDGE_LIST}),
                (load_graph_dataset, {'kind': KIND_KARATE}),
                (load_graph_dataset, {'kind': KIND_TU}),
                ):
            with self.assertRaises(ValueError):
                loader(mapping)
