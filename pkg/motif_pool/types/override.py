# Licensed under AGPL v3 or later

import re

import motif_pool.shared.loaders._yaml as yaml

_OVERRIDE_PATTERN = '^(?P<key>[a-z_][a-z0-9_]*(\\.[a-z_][a-z0-9_]*)?)=(?P<value>.*)$'
_OVERRIDE_MATCHER = re.compile(_OVERRIDE_PATTERN)


def override_type(text):
    """
    Meant to be used as an argparse type

    Turns "mu=0.1" into ('mu', 0.1); the value follows YAML scalar rules,
    so "seeds=[1, 2]" and "global_skip=true" work as expected.
    """
    m = _OVERRIDE_MATCHER.match(text)
    if m is None:
        raise ValueError('"%s" does not match pattern "%s"' % (text, _OVERRIDE_PATTERN))
    try:
        value = yaml.safe_load(m.group('value'))
    except yaml.YAMLError:
        raise ValueError('Value of "%s" is not well-formed' % text)
    return m.group('key'), value


override_type.__name__ = 'key=value override'
