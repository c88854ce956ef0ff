"""
Additive Layer
D-APs, sumset intervals, the dist metric, and sumset oracles
"""

from .additive import (
    DAP,
    DenseSet,
    SumsetInterval,
    brute_sumset,
    cauchy_davenport_bound,
    check_cauchy_davenport,
    dap_of,
    dap_size,
    dist,
    interval_contains,
    is_contiguous,
    sumset_contains_batch,
    sumset_interval,
)

__all__ = [
    'DAP',
    'DenseSet',
    'SumsetInterval',
    'brute_sumset',
    'cauchy_davenport_bound',
    'check_cauchy_davenport',
    'dap_of',
    'dap_size',
    'dist',
    'interval_contains',
    'is_contiguous',
    'sumset_contains_batch',
    'sumset_interval',
]
