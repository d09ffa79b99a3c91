# Licensed under AGPL v3 or later

import argparse
import errno
import json
import os
import sys
from abc import ABCMeta, abstractmethod

from motif_pool.shared.errors import EXIT_NUMERICAL, EXIT_SUCCESS, EXIT_USAGE
from motif_pool.shared.metadata import DEFAULT_OUTPUT_ROOT, ENV_OUTPUT_ROOT
from motif_pool.shared.output_control import add_output_control_options
from motif_pool.types.override import override_type
from motif_pool.types.seeds import seed_list_type

COMMAND_CLASS_FIELD = 'command_class'


class ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1."""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


def add_experiment_options(parser):
    parser.add_argument('--config', metavar='FILE',
        help='experiment configuration (YAML or JSON)')
    parser.add_argument('--seeds', metavar='SEEDS', type=seed_list_type,
        help='seeds to run: a count ("10"), a range ("3-7") or a list ("1,5,9") '
             '(default: taken from config)')
    parser.add_argument('--set', dest='overrides', metavar='KEY=VALUE', type=override_type,
        action='append', default=[],
        help='override a configuration value, e.g. "mu=0" or "dataset.kind=karate" '
             '(can be passed multiple times)')
    parser.add_argument('--workers', metavar='COUNT', type=int, default=1,
        help='number of seeds to run in parallel (default: %(default)s)')
    parser.add_argument('--out', metavar='DIRECTORY',
        help='directory to write results to (default: below $%s or "%s")'
             % (ENV_OUTPUT_ROOT, DEFAULT_OUTPUT_ROOT))


def output_root():
    return os.environ.get(ENV_OUTPUT_ROOT) or DEFAULT_OUTPUT_ROOT


def ensure_directory_writable(messenger, path):
    try:
        os.makedirs(path, 0o755)
    except OSError as e:
        if e.errno != errno.EEXIST:
            raise

        if not os.path.isdir(path):
            raise IOError(errno.ENOTDIR, 'Not a directory: \'%s\'' % path)

        if not os.access(os.path.join(path, ''), os.W_OK):
            raise IOError(errno.EACCES, 'Permission denied: \'%s\'' % path)
    else:
        messenger.info('Created directory "%s".' % path)
    return path


def print_json(values, stream=None):
    json.dump(values, stream or sys.stdout, indent=2, sort_keys=True)
    print(file=stream or sys.stdout)


def exit_code_for_records(records):
    return EXIT_NUMERICAL if any(r.failed for r in records) else EXIT_SUCCESS


class Command(object, metaclass=ABCMeta):
    def __init__(self, messenger, options):
        self._messenger = messenger
        self._options = options

    @classmethod
    def add_parser_to(clazz, subcommands):
        command = subcommands.add_parser(clazz.COMMAND_KEY, help=clazz.COMMAND_HELP,
                                         description=clazz.COMMAND_HELP)
        command.set_defaults(**{COMMAND_CLASS_FIELD: clazz})
        add_output_control_options(command)
        clazz.add_arguments_to(command)

    @classmethod
    def add_arguments_to(clazz, command):
        raise NotImplementedError()

    @classmethod
    def create(clazz, messenger, options):
        return clazz(messenger, options)

    @abstractmethod
    def run(self):
        """Returns a process exit code, or ``None`` for success."""
        pass

    def _summarize(self, out_dir, summary):
        self._messenger.info('Results written to "%s".' % out_dir)
        for row in summary.itertuples(index=False):
            self._messenger.info('  %s: %s (%d run(s))' % (row.metric, row.formatted, row.runs))
