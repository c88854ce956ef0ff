"""
Harness Layer
Oracles, error measurement, the lower-bound adversary, communication tables, and reports
"""

from .lowerbound import (
    CounterExample,
    LowerBoundReport,
    PartitionProtocol,
    attack_random_protocols,
    find_counterexample,
    max_silent_bits,
    random_partition_protocol,
    replay,
    sumdist_partition_protocol,
)
from .reports import build_document, jsonable, render_table, to_records
from .tables import comm_table, lower_bound_bits
from .verification import (
    ErrorReport,
    VerificationReport,
    check_lemmas,
    check_separating_scalars,
    check_sumequal_sizes,
    exhaustive_verify_sumdist,
    integer_oracle,
    measure_error_sumequal,
    modular_oracle,
)

__all__ = [
    'CounterExample',
    'ErrorReport',
    'LowerBoundReport',
    'PartitionProtocol',
    'VerificationReport',
    'attack_random_protocols',
    'build_document',
    'check_lemmas',
    'check_separating_scalars',
    'check_sumequal_sizes',
    'comm_table',
    'exhaustive_verify_sumdist',
    'find_counterexample',
    'integer_oracle',
    'jsonable',
    'lower_bound_bits',
    'max_silent_bits',
    'measure_error_sumequal',
    'modular_oracle',
    'random_partition_protocol',
    'render_table',
    'replay',
    'sumdist_partition_protocol',
    'to_records',
]
