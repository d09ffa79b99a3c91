# Licensed under AGPL v3 or later

"""
Resolution of dataset mappings (as found in experiment configs) to graphs.

A mapping always carries ``kind``; remaining keys are generator parameters
or file locations.
"""

from motif_pool.datasets.edge_list import read_edge_list
from motif_pool.datasets.karate import load_karate
from motif_pool.datasets.synthetic import (
        KIND_GC, KIND_SYN1, KIND_SYN2, KIND_SYN3, GeneratorSpec)
from motif_pool.datasets.tu import load_tu_dataset

KIND_KARATE = 'karate'
KIND_EDGE_LIST = 'edgelist'
KIND_TU = 'tu'

NODE_DATASET_KINDS = (KIND_SYN1, KIND_SYN2, KIND_SYN3, KIND_KARATE, KIND_EDGE_LIST)
GRAPH_DATASET_KINDS = (KIND_GC, KIND_TU)


def _split_kind(mapping):
    mapping = dict(mapping or {})
    try:
        kind = mapping.pop('kind')
    except KeyError:
        raise ValueError('Dataset description lacks a "kind"')
    return kind, mapping


def load_node_dataset(mapping, default_seed=0):
    """A single graph with node features and node labels, for clustering."""
    kind, params = _split_kind(mapping)
    if kind == KIND_KARATE:
        if params:
            raise ValueError('Dataset "karate" takes no parameters')
        return load_karate()
    if kind == KIND_EDGE_LIST:
        try:
            path = params.pop('path')
        except KeyError:
            raise ValueError('Dataset "edgelist" needs a "path"')
        graph = read_edge_list(path, params.pop('n', None), params.pop('features', None),
                               params.pop('labels', None))
        if params:
            raise ValueError('Dataset "edgelist" does not take: %s' % ', '.join(sorted(params)))
        return graph
    if kind not in (KIND_SYN1, KIND_SYN2, KIND_SYN3):
        raise ValueError('Unknown node dataset "%s", expected one of: %s'
                         % (kind, ', '.join(NODE_DATASET_KINDS)))
    seed = params.pop('seed', default_seed)
    return GeneratorSpec(kind, seed, **params).generate()


def load_graph_dataset(mapping, default_seed=0):
    """A labelled set of graphs, for classification."""
    kind, params = _split_kind(mapping)
    if kind == KIND_TU:
        try:
            directory = params.pop('path')
        except KeyError:
            raise ValueError('Dataset "tu" needs a "path"')
        name = params.pop('name', None)
        if params:
            raise ValueError('Dataset "tu" does not take: %s' % ', '.join(sorted(params)))
        return load_tu_dataset(directory, name)
    if kind != KIND_GC:
        raise ValueError('Unknown graph dataset "%s", expected one of: %s'
                         % (kind, ', '.join(GRAPH_DATASET_KINDS)))
    seed = params.pop('seed', default_seed)
    return GeneratorSpec(kind, seed, **params).generate()
