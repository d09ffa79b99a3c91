# Licensed under AGPL v3 or later

import os

from motif_pool.commands.base import Command, ensure_directory_writable, output_root, print_json
from motif_pool.datasets.edge_list import write_edge_list
from motif_pool.datasets.synthetic import GENERATOR_KINDS, KIND_GC, GeneratorSpec
from motif_pool.datasets.tu import write_tu_dataset
from motif_pool.motifs import triangle_count
from motif_pool.types.override import override_type

GRAPH_FILENAME = 'graph.edges'
FEATURES_FILENAME = 'features.csv'
LABELS_FILENAME = 'labels.txt'

GC_DATASET_NAME = 'GC'


class GenerateDataCommand(Command):
    COMMAND_KEY = 'gen-data'
    COMMAND_HELP = 'generate a synthetic dataset and write it to disk'

    @classmethod
    def add_arguments_to(clazz, command):
        command.add_argument('--kind', required=True, choices=GENERATOR_KINDS,
            help='generator to run')
        command.add_argument('--seed', type=int, default=0,
            help='generator seed (default: %(default)s)')
        command.add_argument('--set', dest='params', metavar='KEY=VALUE', type=override_type,
            action='append', default=[],
            help='generator parameter, e.g. "community_size=30" (can be passed multiple times)')
        command.add_argument('--out', metavar='DIRECTORY',
            help='directory to write to (default: <output root>/<kind>-seed<seed>)')

    def run(self):
        options = self._options
        spec = GeneratorSpec(options.kind, options.seed, **dict(options.params))
        out_dir = options.out or os.path.join(output_root(),
                                              '%s-seed%d' % (options.kind, options.seed))
        ensure_directory_writable(self._messenger, out_dir)

        self._messenger.info('Generating "%s" with seed %d...' % (spec.kind, spec.seed))
        generated = spec.generate()
        summary = {'kind': spec.kind, 'seed': spec.seed, 'params': spec.params, 'out': out_dir}

        if spec.kind == KIND_GC:
            write_tu_dataset(generated, out_dir, GC_DATASET_NAME)
            summary.update({
                'graphs': len(generated.graphs),
                'classes': generated.num_classes,
                'max_nodes': generated.max_nodes,
            })
        else:
            write_edge_list(generated,
                            os.path.join(out_dir, GRAPH_FILENAME),
                            os.path.join(out_dir, FEATURES_FILENAME),
                            os.path.join(out_dir, LABELS_FILENAME))
            summary.update({
                'nodes': generated.n,
                'edges': generated.num_edges,
                'triangles': triangle_count(generated),
            })

        print_json(summary)
