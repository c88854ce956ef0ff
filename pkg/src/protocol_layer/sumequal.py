"""
SUM-EQUAL

Purpose: One-round protocol with public randomness deciding whether k inputs in
Z_p sum to g, with one-sided error at most epsilon.

Design Ideas:
- Same encoder as SUM-DIST, but c is drawn uniformly from Z_p \\ {0} with the shared seed
- D = ceil(2kp / (epsilon (p - 3))) keeps every sumset below epsilon (p-1)/2 + 1 elements
- The coordinator outputs 1 iff c*g lies in the sumset interval, so on-target inputs never err
- epsilon is a Fraction end to end; the regime test and the ceiling are exact
- exact_error replaces the probability over c with a count over all p-1 values
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from src.additive_layer import (
    DAP,
    dist,
    interval_contains,
    sumset_contains_batch,
    sumset_interval,
)
from src.errors import (
    OnPromiseError,
    OutOfRangeError,
    TrivialRegimeError,
)
from src.modular_layer import PrimeModulus

from .randomness import PublicRandomness, sample_c
from .sumdist import DAP_MODE, FALLBACK_MODE, check_inputs, in_dap_regime
from .transcript import Transcript, bit_width

logger = logging.getLogger(__name__)


def in_eq_regime(p: int, k: int, epsilon: Fraction) -> bool:
    return in_dap_regime(p, k) and epsilon > Fraction(2 * k, p - 3)


@dataclass(frozen=True)
class SumEqualInstance:
    """k-party SUM-EQUAL over Z_p relative to g, error budget epsilon."""

    p: int
    k: int
    g: int
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'p', PrimeModulus(self.p))
        object.__setattr__(self, 'epsilon', Fraction(self.epsilon))
        if self.k < 2:
            raise OutOfRangeError(f"at least two parties are needed, got k={self.k}")
        if not 0 <= self.g < self.p:
            raise OutOfRangeError(f"target {self.g} is not reduced mod {self.p}")
        if not 0 < self.epsilon < 1:
            raise OutOfRangeError(f"epsilon {self.epsilon} is outside (0, 1)")

    @property
    def mode(self) -> str:
        try:
            derive_D_eq(self.p, self.k, self.epsilon)
        except TrivialRegimeError:
            return FALLBACK_MODE
        return DAP_MODE


@dataclass(frozen=True)
class ErrorProfile:
    """Exact error of one off-target input tuple, counted over every c."""

    instance: SumEqualInstance
    inputs: Tuple[int, ...]
    failing: int
    total: int

    @property
    def error(self) -> Fraction:
        return Fraction(self.failing, self.total)


def derive_D_eq(p: int, k: int, epsilon: Fraction) -> int:
    """
    D = ceil(2kp / (epsilon (p - 3))), computed with exact rationals.
    """
    epsilon = Fraction(epsilon)
    if not in_eq_regime(p, k, epsilon):
        raise TrivialRegimeError(
            f"p={p}, k={k}, epsilon={epsilon} needs p > 5, k < p/4, epsilon > 2k/(p-3)"
        )
    D = math.ceil(Fraction(2 * k * p) / (epsilon * (p - 3)))
    if D >= p:
        raise TrivialRegimeError(f"D={D} is not below p={p}")
    return D


def coordinator_accepts(bases: Sequence[int], c: int, g: int, D: int, p: int) -> int:
    """1 iff c*g lies in the sumset of the A_(b_i)."""
    daps = [DAP(p, D, b) for b in bases]
    return 1 if interval_contains(sumset_interval(daps), c * g % p) else 0


def run_sumequal(instance: SumEqualInstance, inputs: Sequence[int],
                 pub: PublicRandomness) -> Tuple[int, Transcript]:
    """
    One run with the shared seed.

    Args:
        instance: The SUM-EQUAL instance
        inputs: One residue per party
        pub: Public randomness shared by the parties and the coordinator

    Returns:
        (decision bit, transcript)
    """
    p, k = instance.p, instance.k
    inputs = check_inputs(p, k, inputs)
    eps = f"{instance.epsilon.numerator}/{instance.epsilon.denominator}"

    if instance.mode == FALLBACK_MODE:
        logger.debug("sumequal p=%d k=%d eps=%s runs the trivial protocol", p, k, eps)
        header = {'mode': FALLBACK_MODE, 'p': p, 'k': k, 'D': p, 'c': 1,
                  'seed': pub.seed, 'g': instance.g, 'eps': eps}
        transcript = Transcript.from_values('sumequal', header, inputs, bit_width(p))
        return (1 if sum(inputs) % p == instance.g else 0), transcript

    D = derive_D_eq(p, k, instance.epsilon)
    c = sample_c(pub, p)
    logger.debug("sumequal params p=%d k=%d D=%d c=%d seed=%d", p, k, D, c, pub.seed)
    bases = [c * x % p % D for x in inputs]
    header = {'mode': DAP_MODE, 'p': p, 'k': k, 'D': D, 'c': c,
              'seed': pub.seed, 'g': instance.g, 'eps': eps}
    transcript = Transcript.from_values('sumequal', header, bases, bit_width(D))
    return coordinator_accepts(bases, c, instance.g, D, p), transcript


def exact_error(instance: SumEqualInstance, inputs: Sequence[int]) -> ErrorProfile:
    """
    Count the scalars c in [1, p-1] on which the coordinator wrongly accepts.

    Args:
        instance: The SUM-EQUAL instance (p < 2^31)
        inputs: An off-target input tuple

    Returns:
        ErrorProfile with the exact rational error
    """
    p, k = int(instance.p), instance.k
    inputs = check_inputs(p, k, inputs)
    if sum(inputs) % p == instance.g:
        raise OnPromiseError("inputs hit the target; the error is identically 0")
    if instance.mode == FALLBACK_MODE:
        return ErrorProfile(instance, tuple(inputs), 0, p - 1)

    D = derive_D_eq(p, k, instance.epsilon)
    cs = np.arange(1, p, dtype=np.int64)
    x = np.asarray(inputs, dtype=np.int64)
    bases = cs[:, None] * x[None, :] % p % D
    accepted = sumset_contains_batch(bases, D, p, cs * instance.g % p)
    return ErrorProfile(instance, tuple(inputs), int(np.count_nonzero(accepted)), p - 1)


def count_separating_scalars(p: int, D: int, g: int, g_prime: int, xi: Fraction) -> int:
    """
    Number of c in [1, p-1] with dist(c*g, c*g') > (1 - xi)(p - 1)/2.

    For distinct g, g' this is at least xi (p - 1), whatever D is.
    """
    threshold = (1 - Fraction(xi)) * Fraction(p - 1, 2)
    return sum(1 for c in range(1, p) if dist(c * g % p, c * g_prime % p, D, p) > threshold)
