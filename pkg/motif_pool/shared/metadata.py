# Licensed under AGPL v3 or later

PACKAGE_NAME = 'motif-pool'

DESCRIPTION = 'Command line tool for higher-order (motif-based) graph clustering and pooling'

_VERSION = (0, 3, 0)
VERSION_STR = '.'.join((str(e) for e in _VERSION))

_RELEASE_DATE = (2026, 10, 18)
RELEASE_DATE_STR = '-'.join(('%02d' % e for e in _RELEASE_DATE))

ENV_OUTPUT_ROOT = 'MOTIF_POOL_OUTPUT'
DEFAULT_OUTPUT_ROOT = 'results'
