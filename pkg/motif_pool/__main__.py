# Licensed under AGPL v3 or later

import signal
import sys

from motif_pool.commands.base import COMMAND_CLASS_FIELD, ArgumentParser
from motif_pool.commands.classify import ClassifyCommand
from motif_pool.commands.cluster import ClusterCommand
from motif_pool.commands.gen_data import GenerateDataCommand
from motif_pool.commands.metrics import MetricsCommand
from motif_pool.commands.motif import MotifCommand
from motif_pool.commands.verify import VerifyCommand
from motif_pool.shared.messenger import Messenger, fix_output_encoding
from motif_pool.shared.metadata import DESCRIPTION, RELEASE_DATE_STR, VERSION_STR
from motif_pool.shared.output_control import is_color_wanted, run_handle_errors

COMMAND_CLASSES = (
        GenerateDataCommand,
        ClusterCommand,
        ClassifyCommand,
        MotifCommand,
        MetricsCommand,
        VerifyCommand,
        )


def _main__level_three(messenger, options):
    command_class = getattr(options, COMMAND_CLASS_FIELD)
    command = command_class.create(messenger, options)
    return command.run()


def create_parser():
    parser = ArgumentParser(prog='motif-pool', description=DESCRIPTION)
    parser.add_argument('--version', action='version',
            version='%%(prog)s %s :: %s' % (VERSION_STR, RELEASE_DATE_STR))

    commands = parser.add_subparsers(title='subcommands',
            description='Run "%(prog)s COMMAND --help" for details '
                    'on options specific to that command.',
            metavar='COMMAND', help='command to run, pick from:')
    commands.required = True

    for strategy_clazz in COMMAND_CLASSES:
        strategy_clazz.add_parser_to(commands)

    return parser


def _main__level_two(argv):
    options = create_parser().parse_args(argv)

    messenger = Messenger(options.verbosity, is_color_wanted(options))
    return run_handle_errors(_main__level_three, messenger, options)


def main(argv=None):
    try:
        fix_output_encoding()
        return _main__level_two(argv)
    except KeyboardInterrupt:
        return 128 + signal.SIGINT


if __name__ == '__main__':
    sys.exit(main())
