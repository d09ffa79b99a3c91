# Licensed under AGPL v3 or later

import os
import sys
import traceback

from motif_pool.shared.errors import EXIT_SUCCESS, exit_code_for
from motif_pool.shared.messenger import VERBOSITY_QUIET, VERBOSITY_VERBOSE

_COLORIZE_NEVER = 'never'
_COLORIZE_ALWAYS = 'always'
_COLORIZE_AUTO = 'auto'


def add_output_control_options(parser):
    output = parser.add_argument_group('text output configuration')
    output.add_argument('--color', default=_COLORIZE_AUTO, choices=[_COLORIZE_NEVER, _COLORIZE_ALWAYS, _COLORIZE_AUTO],
        help='toggle output color (default: %(default)s)')
    output.add_argument('--debug', action='store_true',
        help='enable debugging (print tracebacks)')
    output.add_argument('--quiet', dest='verbosity', action='store_const', const=VERBOSITY_QUIET,
        help='limit output to error messages')
    output.add_argument('--verbose', dest='verbosity', action='store_const', const=VERBOSITY_VERBOSE,
        help='increase verbosity (per-run and per-epoch progress)')


def is_color_wanted(options):
    if options.color == _COLORIZE_AUTO:
        try:
            colorize = os.isatty(sys.stderr.fileno())
        except (AttributeError, ValueError, OSError):
            colorize = False
    else:
        colorize = options.color == _COLORIZE_ALWAYS

    return colorize


def run_handle_errors(main_function, messenger, options):
    """
    Runs ``main_function(messenger, options)`` and returns a process exit code.

    A main function may itself return a non-zero exit code (e.g. a run that
    recorded a numerical failure but still wrote its artifacts).
    """
    try:
        exit_code = main_function(messenger, options)
    except KeyboardInterrupt:
        messenger.info('Interrupted.')
        raise
    except Exception as e:
        if options.debug:
            traceback.print_exc(file=sys.stderr)

        messenger.error(str(e) or e.__class__.__name__)
        return exit_code_for(e)

    return EXIT_SUCCESS if exit_code is None else exit_code
