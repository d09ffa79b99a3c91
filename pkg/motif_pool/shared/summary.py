# Licensed under AGPL v3 or later

import math

import numpy as np


def mean_std(values):
    """
    Mean and sample standard deviation (ddof=1); the std of a single value is 0.
    """
    values = np.asarray(list(values), dtype=np.float64)
    if values.size == 0:
        raise ValueError('Cannot summarize an empty sequence of values')
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return mean, std


def format_mean_std(values, digits=3):
    mean, std = mean_std(values)
    if math.isnan(mean):
        return 'nan'
    return '%.*f ± %.*f' % (digits, mean, digits, std)
