# Licensed under AGPL v3 or later

import re

_SEED_LIST_PATTERN = '^[0-9]+(,[0-9]+)*$'
_SEED_LIST_MATCHER = re.compile(_SEED_LIST_PATTERN)

_SEED_RANGE_PATTERN = '^(?P<first>[0-9]+)-(?P<last>[0-9]+)$'
_SEED_RANGE_MATCHER = re.compile(_SEED_RANGE_PATTERN)


def seed_list_type(text):
    """
    Meant to be used as an argparse type

    Accepts a count ("10" means seeds 0..9), an inclusive range ("3-7")
    or an explicit comma-separated list ("1,5,9").
    """
    m = _SEED_RANGE_MATCHER.match(text)
    if m is not None:
        first, last = int(m.group('first')), int(m.group('last'))
        if first > last:
            raise ValueError('Seed range "%s" is empty' % text)
        return list(range(first, last + 1))

    if not _SEED_LIST_MATCHER.match(text):
        raise ValueError('"%s" does not match pattern "%s"' % (text, _SEED_LIST_PATTERN))

    if ',' in text:
        return [int(e) for e in text.split(',')]

    count = int(text)
    if count < 1:
        raise ValueError('Number of seeds must be positive, got %d' % count)
    return list(range(count))


seed_list_type.__name__ = 'seed list'
