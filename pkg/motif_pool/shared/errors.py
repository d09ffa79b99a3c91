# Licensed under AGPL v3 or later

EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class MotifPoolError(Exception):
    exit_code = EXIT_USAGE


class DataError(MotifPoolError, ValueError):
    """Malformed input files, impossible generator parameters, size limits."""
    exit_code = EXIT_DATA


class ShapeError(MotifPoolError, ValueError):
    exit_code = EXIT_USAGE


class NumericalError(MotifPoolError, ArithmeticError):
    """Non-finite values or a failing eigensolver."""
    exit_code = EXIT_NUMERICAL


def exit_code_for(e):
    return getattr(e, 'exit_code', EXIT_USAGE)
