"""
Lower Bound

Purpose: Construct, for a deterministic one-round protocol with too few bits per
party, two legal inputs the coordinator cannot tell apart.

Design Ideas:
- A protocol with t bits per party is just one labeling of Z_p per party into 2^t classes
- Parties 1..k-1 take their heaviest class (lowest label on ties); the sumset of those
  classes is built with a witness table so every reachable sum remembers one preimage
- Party k's input x_k is shared by both tuples; any x_k with g0 - x_k and g1 - x_k
  reachable gives a counterexample
- When t is small enough the sumset is all of Z_p and x_k = 0 already works
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.errors import DegenerateTargetsError, MixedParametersError, OutOfRangeError
from src.modular_layer import is_prime
from src.protocol_layer import (
    FALLBACK_MODE,
    SumDistInstance,
    bit_width,
    derive_params,
)

logger = logging.getLogger(__name__)


@dataclass
class PartitionProtocol:
    """
    Any deterministic one-round protocol with t-bit messages.

    labels[i, x] is the message party i sends on input x.
    """

    p: int
    k: int
    t: int
    labels: np.ndarray

    def __post_init__(self):
        if self.p < 2 or not is_prime(self.p):
            raise OutOfRangeError(f"{self.p} is not prime")
        if self.k < 2 or self.t < 0:
            raise OutOfRangeError(f"need k >= 2 and t >= 0, got k={self.k}, t={self.t}")
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.shape != (self.k, self.p):
            raise MixedParametersError(
                f"labels of shape {self.labels.shape}, expected {(self.k, self.p)}"
            )
        if self.labels.min() < 0 or self.labels.max() >= 1 << self.t:
            raise OutOfRangeError(f"labels must lie in [0, 2^{self.t})")

    def message(self, party: int, x: int) -> int:
        return int(self.labels[party, x % self.p])

    def messages(self, inputs) -> Tuple[int, ...]:
        return tuple(self.message(i, x) for i, x in enumerate(inputs))

    def heaviest_class(self, party: int) -> Tuple[int, np.ndarray]:
        """(label, members) of the largest class; np.argmax keeps the lowest label on ties."""
        counts = np.bincount(self.labels[party], minlength=1 << self.t)
        label = int(np.argmax(counts))
        return label, np.flatnonzero(self.labels[party] == label)


@dataclass(frozen=True)
class CounterExample:
    messages: Tuple[int, ...]
    x: Tuple[int, ...]
    x_prime: Tuple[int, ...]
    x_k: int
    g0: int
    g1: int


def max_silent_bits(p: int, k: int) -> int:
    """
    Largest t with t <= min{log2((k-1)/2), log2(p/2)}, or -1 if none.
    """
    t = -1
    while 2 ** (t + 2) <= k - 1 and 2 ** (t + 2) <= p:
        t += 1
    return t


def random_partition_protocol(p: int, k: int, t: int,
                              rng: np.random.Generator) -> PartitionProtocol:
    return PartitionProtocol(p, k, t, rng.integers(0, 1 << t, size=(k, p)))


def sumdist_partition_protocol(instance: SumDistInstance) -> PartitionProtocol:
    """The deterministic SUM-DIST encoder written out as per-party labelings."""
    p, k = int(instance.p), instance.k
    xs = np.arange(p, dtype=np.int64)
    if instance.mode == FALLBACK_MODE:
        return PartitionProtocol(p, k, bit_width(p), np.tile(xs, (k, 1)))
    params = derive_params(instance)
    row = params.c * xs % p % params.D
    return PartitionProtocol(p, k, bit_width(params.D), np.tile(row, (k, 1)))


def _witness_sumset(p: int, classes: List[np.ndarray]) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Reachable sums of one element per class, with one witness per sum.

    choices[j][s] is the element of class j used to reach s at level j.
    """
    reach = np.zeros(p, dtype=bool)
    reach[classes[0]] = True
    choices = [np.where(reach, np.arange(p), -1)]
    for members in classes[1:]:
        nxt = np.zeros(p, dtype=bool)
        choice = np.full(p, -1, dtype=np.int64)
        for a in members:
            shifted = np.roll(reach, int(a))
            fresh = shifted & ~nxt
            choice[fresh] = a
            nxt |= shifted
        reach = nxt
        choices.append(choice)
    return reach, choices


def _unwind(p: int, choices: List[np.ndarray], s: int) -> List[int]:
    picked = []
    for choice in reversed(choices):
        a = int(choice[s])
        picked.append(a)
        s = (s - a) % p
    return picked[::-1]


def find_counterexample(proto: PartitionProtocol, g0: int, g1: int) -> Optional[CounterExample]:
    """
    Search for two legal inputs with identical messages and sums g0, g1.

    Args:
        proto: The protocol under attack
        g0: First target
        g1: Second target

    Returns:
        A CounterExample, or None if the heaviest-class search finds nothing
    """
    p, k = proto.p, proto.k
    g0, g1 = g0 % p, g1 % p
    if g0 == g1:
        raise DegenerateTargetsError(f"g0 and g1 are both {g0}")

    heavy = [proto.heaviest_class(i) for i in range(k - 1)]
    reach, choices = _witness_sumset(p, [members for _, members in heavy])

    xs = np.arange(p)
    usable = np.flatnonzero(reach[(g0 - xs) % p] & reach[(g1 - xs) % p])
    if usable.size == 0:
        logger.debug("no counterexample: sumset covers %d of %d residues",
                     int(reach.sum()), p)
        return None

    x_k = int(usable[0])
    x = tuple(_unwind(p, choices, (g0 - x_k) % p)) + (x_k,)
    x_prime = tuple(_unwind(p, choices, (g1 - x_k) % p)) + (x_k,)
    messages = tuple(label for label, _ in heavy) + (proto.message(k - 1, x_k),)
    return CounterExample(messages, x, x_prime, x_k, g0, g1)


def replay(counter_example: CounterExample, proto: PartitionProtocol) -> bool:
    """
    True iff both tuples send the recorded messages and hit their targets.
    """
    ce = counter_example
    return (
        proto.messages(ce.x) == ce.messages
        and proto.messages(ce.x_prime) == ce.messages
        and ce.x[-1] == ce.x_prime[-1] == ce.x_k
        and sum(ce.x) % proto.p == ce.g0
        and sum(ce.x_prime) % proto.p == ce.g1
    )


@dataclass
class LowerBoundReport:
    p: int
    k: int
    t: int
    in_regime: bool
    protocols: int
    found: int
    verified: int

    @property
    def ok(self) -> bool:
        if not self.in_regime:
            return self.verified == self.found
        return self.found == self.protocols and self.verified == self.found


def attack_random_protocols(p: int, k: int, t: int, count: int, seed: int,
                            g0: int = 0, g1: int = 1) -> LowerBoundReport:
    """
    Run find_counterexample on `count` random t-bit protocols and replay every hit.
    """
    rng = np.random.default_rng(seed)
    found = verified = 0
    for _ in range(count):
        proto = random_partition_protocol(p, k, t, rng)
        ce = find_counterexample(proto, g0, g1)
        if ce is not None:
            found += 1
            verified += replay(ce, proto)
    in_regime = 0 <= t <= max_silent_bits(p, k)
    logger.info("lowerbound p=%d k=%d t=%d found %d/%d", p, k, t, found, count)
    return LowerBoundReport(p, k, t, in_regime, count, found, verified)
