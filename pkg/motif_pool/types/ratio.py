# Licensed under AGPL v3 or later


def require_open_unit_interval(value, name='ratio'):
    if not 0.0 < value < 1.0:
        raise ValueError('%s must lie strictly between 0 and 1, got %r' % (name, value))


def ratio_type(text):
    """
    Meant to be used as an argparse type
    """
    value = float(text)
    require_open_unit_interval(value)
    return value


ratio_type.__name__ = 'ratio'
