"""
SUM-DIST

Purpose: Deterministic one-round protocol deciding whether k inputs in Z_p sum
to g0 or to g1.

Design Ideas:
- Every party scales its input by c and sends the base of the D-AP holding it, ceil(log2 D) bits
- c puts c*g0 and c*g1 exactly (p-1)/2 D-steps apart; D keeps every k-fold sumset at most (p-1)/2 long
- The coordinator outputs 0 iff c*g0 lies in the sumset interval of the received bases
- Outside the regime (p <= 5 or k >= p/4) parties send raw residues and the coordinator adds them
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.additive_layer import (
    DAP,
    interval_contains,
    sumset_contains_batch,
    sumset_interval,
)
from src.errors import (
    ArityMismatchError,
    EqualTargetsError,
    OutOfRangeError,
    TrivialRegimeError,
)
from src.modular_layer import PrimeModulus, mod_inverse

from .transcript import Transcript, bit_width

logger = logging.getLogger(__name__)

DAP_MODE = "dap-protocol"
FALLBACK_MODE = "trivial-fallback"


def in_dap_regime(p: int, k: int) -> bool:
    return p > 5 and 4 * k < p


@dataclass(frozen=True)
class SumDistInstance:
    """k-party SUM-DIST over Z_p relative to distinct targets g0, g1."""

    p: int
    k: int
    g0: int
    g1: int

    def __post_init__(self):
        object.__setattr__(self, 'p', PrimeModulus(self.p))
        if self.k < 2:
            raise OutOfRangeError(f"at least two parties are needed, got k={self.k}")
        for g in (self.g0, self.g1):
            if not 0 <= g < self.p:
                raise OutOfRangeError(f"target {g} is not reduced mod {self.p}")
        if self.g0 == self.g1:
            raise EqualTargetsError(f"g0 and g1 are both {self.g0}")

    @property
    def mode(self) -> str:
        return DAP_MODE if in_dap_regime(self.p, self.k) else FALLBACK_MODE


@dataclass(frozen=True)
class SumDistParams:
    p: int
    c: int
    D: int


def derive_D(p: int, k: int) -> int:
    """
    D = ceil(2kp / (p - 3)).

    Every k-fold sumset of D-APs then has at most (p-1)/2 elements.
    """
    if not in_dap_regime(p, k):
        raise TrivialRegimeError(f"p={p}, k={k} needs p > 5 and k < p/4")
    D = -(-2 * k * p // (p - 3))
    if D >= p:
        raise TrivialRegimeError(f"D={D} is not below p={p}")
    return D


def derive_c(p: int, D: int, g0: int, g1: int) -> int:
    """
    c = (p-1)/2 * D * (g1 - g0)^{-1} mod p, so dist(c*g0, c*g1) = (p-1)/2.
    """
    if (g0 - g1) % p == 0:
        raise EqualTargetsError(f"g0 and g1 coincide mod {p}")
    return (p - 1) // 2 * D * mod_inverse(g1 - g0, p) % p


def derive_params(instance: SumDistInstance) -> SumDistParams:
    D = derive_D(instance.p, instance.k)
    c = derive_c(instance.p, D, instance.g0, instance.g1)
    logger.debug("sumdist params p=%d k=%d D=%d c=%d", instance.p, instance.k, D, c)
    return SumDistParams(instance.p, c, D)


def party_message(x: int, params: SumDistParams) -> int:
    """b_i = ((c * x_i) mod p) mod D, the base of the D-AP holding c*x_i."""
    return params.c * x % params.p % params.D


def coordinator_decide(bases: Sequence[int], instance: SumDistInstance,
                       params: SumDistParams) -> int:
    """
    0 if c*g0 lies in the sumset of the A_(b_i), 1 otherwise.
    """
    if len(bases) != instance.k:
        raise ArityMismatchError(f"{len(bases)} messages for k={instance.k} parties")
    daps = [DAP(params.p, params.D, b) for b in bases]
    target = params.c * instance.g0 % params.p
    return 0 if interval_contains(sumset_interval(daps), target) else 1


def check_inputs(p: int, k: int, inputs: Sequence[int]) -> List[int]:
    if len(inputs) != k:
        raise ArityMismatchError(f"{len(inputs)} inputs for k={k} parties")
    for x in inputs:
        if not 0 <= x < p:
            raise OutOfRangeError(f"input {x} is not reduced mod {p}")
    return [int(x) for x in inputs]


def on_promise(instance: SumDistInstance, inputs: Sequence[int]) -> bool:
    return sum(inputs) % instance.p in (instance.g0, instance.g1)


def run_sumdist(instance: SumDistInstance, inputs: Sequence[int]) -> Tuple[int, Transcript]:
    """
    End-to-end run: derive parameters, encode every party, decide.

    Args:
        instance: The SUM-DIST instance
        inputs: One residue per party

    Returns:
        (decision bit, transcript)
    """
    p, k = instance.p, instance.k
    inputs = check_inputs(p, k, inputs)

    if instance.mode == FALLBACK_MODE:
        logger.debug("sumdist p=%d k=%d runs the trivial protocol", p, k)
        header = {'mode': FALLBACK_MODE, 'p': p, 'k': k, 'D': p, 'c': 1,
                  'g0': instance.g0, 'g1': instance.g1}
        transcript = Transcript.from_values('sumdist', header, inputs, bit_width(p))
        decision = 0 if sum(transcript.values) % p == instance.g0 else 1
        return decision, transcript

    params = derive_params(instance)
    bases = [party_message(x, params) for x in inputs]
    header = {'mode': DAP_MODE, 'p': p, 'k': k, 'D': params.D, 'c': params.c,
              'g0': instance.g0, 'g1': instance.g1}
    transcript = Transcript.from_values('sumdist', header, bases, bit_width(params.D))
    return coordinator_decide(bases, instance, params), transcript


def bits_per_party(p: int, k: int) -> int:
    """Message width the protocol uses for (p, k), in either mode."""
    if in_dap_regime(p, k):
        return bit_width(derive_D(p, k))
    return bit_width(p)


def decide_batch(instance: SumDistInstance, inputs: np.ndarray) -> np.ndarray:
    """
    Coordinator decisions for many input tuples at once (p < 2^31).

    Args:
        instance: The SUM-DIST instance
        inputs: int64 array of shape (n, k)

    Returns:
        int8 array of n decision bits, equal to run_sumdist row by row
    """
    inputs = np.asarray(inputs, dtype=np.int64)
    if inputs.ndim != 2 or inputs.shape[1] != instance.k:
        raise ArityMismatchError(f"input batch of shape {inputs.shape} for k={instance.k}")
    p = int(instance.p)
    if instance.mode == FALLBACK_MODE:
        return np.where(inputs.sum(axis=1) % p == instance.g0, 0, 1).astype(np.int8)
    params = derive_params(instance)
    bases = params.c * inputs % p % params.D
    hit = sumset_contains_batch(bases, params.D, p, params.c * instance.g0 % p)
    return np.where(hit, 0, 1).astype(np.int8)
