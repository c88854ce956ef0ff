"""
Protocol Layer
One-round SUM-DIST and SUM-EQUAL protocols, transcripts, and public randomness
"""

from .randomness import PublicRandomness, SplitMix64, derive_seed, sample_c
from .sumdist import (
    DAP_MODE,
    FALLBACK_MODE,
    SumDistInstance,
    SumDistParams,
    bits_per_party,
    coordinator_decide,
    decide_batch,
    derive_c,
    derive_D,
    derive_params,
    in_dap_regime,
    on_promise,
    party_message,
    run_sumdist,
)
from .sumequal import (
    ErrorProfile,
    SumEqualInstance,
    coordinator_accepts,
    count_separating_scalars,
    derive_D_eq,
    exact_error,
    in_eq_regime,
    run_sumequal,
)
from .transcript import CompositeTranscript, Message, Transcript, bit_width

__all__ = [
    'CompositeTranscript',
    'DAP_MODE',
    'ErrorProfile',
    'FALLBACK_MODE',
    'Message',
    'PublicRandomness',
    'SplitMix64',
    'SumDistInstance',
    'SumDistParams',
    'SumEqualInstance',
    'Transcript',
    'bit_width',
    'bits_per_party',
    'coordinator_accepts',
    'coordinator_decide',
    'count_separating_scalars',
    'decide_batch',
    'derive_D',
    'derive_D_eq',
    'derive_c',
    'derive_params',
    'derive_seed',
    'exact_error',
    'in_dap_regime',
    'in_eq_regime',
    'on_promise',
    'party_message',
    'run_sumdist',
    'run_sumequal',
    'sample_c',
]
