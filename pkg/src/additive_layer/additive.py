"""
Additive Layer

Purpose: D-APs, their sumsets as contiguous intervals, the dist metric, and
brute-force oracles for the sumset lemmas the protocols lean on.

Design Ideas:
- A D-AP is maximal and never wraps: {b, b+D, ...} below p, base b < D
- A sumset of D-APs is an interval {start + i*D : 0 <= i < length}, so it is stored as two ints
- Membership is one multiplication by D^{-1}
- Arbitrary sets are numpy bitmaps over Z_p; they exist for the oracles only (p <= 2^16)
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

import config
from src.errors import (
    BadDifferenceError,
    EmptySetError,
    MixedParametersError,
    OutOfRangeError,
)
from src.modular_layer import mod_inverse


def _check_difference(D: int, p: int) -> None:
    if not 1 <= D < p:
        raise BadDifferenceError(f"difference {D} outside [1, {p})")


def dap_size(b: int, D: int, p: int) -> int:
    """|A_(b)| = floor((p - 1 - b) / D) + 1."""
    return (p - 1 - b) // D + 1


@dataclass(frozen=True)
class DAP:
    """Maximal no-wrap arithmetic progression in Z_p with difference D and base b."""

    p: int
    D: int
    b: int

    def __post_init__(self):
        _check_difference(self.D, self.p)
        if not 0 <= self.b < self.D:
            raise OutOfRangeError(f"base {self.b} outside [0, {self.D})")

    @property
    def size(self) -> int:
        return dap_size(self.b, self.D, self.p)

    def elements(self) -> List[int]:
        return list(range(self.b, self.p, self.D))

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.p and x % self.D == self.b


@dataclass(frozen=True)
class SumsetInterval:
    """{start + i*D mod p : 0 <= i < length}, length capped at p."""

    p: int
    D: int
    start: int
    length: int

    def __post_init__(self):
        _check_difference(self.D, self.p)
        if not 1 <= self.length <= self.p:
            raise OutOfRangeError(f"interval length {self.length} outside [1, {self.p}]")

    def elements(self) -> List[int]:
        return [(self.start + i * self.D) % self.p for i in range(self.length)]

    def __len__(self) -> int:
        return self.length

    def __contains__(self, g: int) -> bool:
        return interval_contains(self, g)


class DenseSet:
    """
    Membership bitmap over Z_p.

    Oracle equipment: every operation is linear or quadratic in p.
    """

    def __init__(self, p: int, bitmap: np.ndarray):
        if p > config.DENSE_SET_MAX_P:
            raise OutOfRangeError(f"dense sets are limited to p <= 2^16, got {p}")
        bitmap = np.asarray(bitmap, dtype=bool)
        if bitmap.shape != (p,):
            raise MixedParametersError(f"bitmap of shape {bitmap.shape} for p={p}")
        self.p = p
        self.bitmap = bitmap

    @classmethod
    def from_elements(cls, elements: Iterable[int], p: int) -> "DenseSet":
        bitmap = np.zeros(p, dtype=bool)
        idx = np.fromiter((e % p for e in elements), dtype=np.int64)
        bitmap[idx] = True
        return cls(p, bitmap)

    @classmethod
    def from_dap(cls, dap: DAP) -> "DenseSet":
        return cls.from_elements(dap.elements(), dap.p)

    def elements(self) -> List[int]:
        return [int(e) for e in np.flatnonzero(self.bitmap)]

    def __len__(self) -> int:
        return int(np.count_nonzero(self.bitmap))

    def __contains__(self, x: int) -> bool:
        return bool(self.bitmap[x % self.p])

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseSet):
            return NotImplemented
        return self.p == other.p and bool(np.array_equal(self.bitmap, other.bitmap))

    def __repr__(self) -> str:
        return f"DenseSet(p={self.p}, {self.elements()})"


def dap_of(x: int, D: int, p: int) -> DAP:
    """
    The unique maximal D-AP containing x.

    Args:
        x: Residue in [0, p)
        D: Difference, 1 <= D < p
        p: Prime modulus

    Returns:
        DAP with base x mod D
    """
    _check_difference(D, p)
    return DAP(p, D, (x % p) % D)


def sumset_interval(daps: Sequence[DAP]) -> SumsetInterval:
    """
    Closed form of a sumset of D-APs.

    The sum of k D-APs with bases b_i is the interval starting at sum(b_i)
    with min{p, sum|A_i| - k + 1} steps of D.

    Args:
        daps: Nonempty list of D-APs sharing p and D

    Returns:
        The SumsetInterval
    """
    if not daps:
        raise EmptySetError("sumset of an empty family")
    p, D = daps[0].p, daps[0].D
    if any(a.p != p or a.D != D for a in daps):
        raise MixedParametersError("D-APs must share p and D")
    start = sum(a.b for a in daps) % p
    length = min(p, sum(a.size for a in daps) - len(daps) + 1)
    return SumsetInterval(p, D, start, length)


def dist(g0: int, g1: int, D: int, p: int) -> int:
    """
    Number of +-D steps separating g0 and g1 in Z_p.

    Returns:
        min{(g1 - g0) D^{-1}, (g0 - g1) D^{-1}} mod p, in [0, (p-1)/2]
    """
    _check_difference(D, p)
    forward = (g1 - g0) * mod_inverse(D, p) % p
    return min(forward, (p - forward) % p)


def interval_contains(s: SumsetInterval, g: int) -> bool:
    """
    True iff g lies in the interval: ((g - start) * D^{-1} mod p) < length.
    """
    if s.length >= s.p:
        return True
    return (g - s.start) * mod_inverse(s.D, s.p) % s.p < s.length


def brute_sumset(sets: Sequence[DenseSet]) -> DenseSet:
    """
    Exact sumset by enumeration.

    Each step ORs one rotated copy of the running bitmap per element of the
    next set, so the cost is O(p * sum|A_i|).
    """
    if not sets:
        raise EmptySetError("sumset of an empty family")
    p = sets[0].p
    if any(s.p != p for s in sets):
        raise MixedParametersError("sets must share p")
    if any(len(s) == 0 for s in sets):
        raise EmptySetError("every set in a sumset must be nonempty")

    acc = sets[0].bitmap.copy()
    for s in sets[1:]:
        nxt = np.zeros(p, dtype=bool)
        for a in np.flatnonzero(s.bitmap):
            nxt |= np.roll(acc, int(a))
        acc = nxt
    return DenseSet(p, acc)


def cauchy_davenport_bound(sets: Sequence[DenseSet]) -> int:
    p = sets[0].p
    return min(p, sum(len(s) for s in sets) - len(sets) + 1)


def check_cauchy_davenport(sets: Sequence[DenseSet]) -> bool:
    """
    |sum A_i| >= min{p, sum|A_i| - k + 1}. Always true over a prime; an oracle.
    """
    return len(brute_sumset(sets)) >= cauchy_davenport_bound(sets)


def is_contiguous(elements: Iterable[int], D: int, p: int) -> bool:
    """
    True iff the set can be ordered so that neighbours are at dist 1.

    In D-step coordinates (x * D^{-1}) that means the positions form a single
    cyclic run: exactly one element lacks a predecessor, unless the set is
    all of Z_p.
    """
    _check_difference(D, p)
    inv = mod_inverse(D, p)
    positions = {x * inv % p for x in elements}
    if len(positions) <= 1 or len(positions) == p:
        return True
    run_heads = sum(1 for i in positions if (i - 1) % p not in positions)
    return run_heads == 1


def sumset_contains_batch(bases: np.ndarray, D: int, p: int, g) -> np.ndarray:
    """
    Vectorized coordinator test over many base tuples at once.

    Args:
        bases: int64 array of shape (n, k), every entry in [0, D)
        D: Difference
        p: Prime modulus below 2^31
        g: Target residue, scalar or array of shape (n,)

    Returns:
        Boolean array of shape (n,): g in sum_i A_(bases[:, i])
    """
    if p >= config.VECTOR_MODULUS_CAP:
        raise OutOfRangeError(f"batch path needs p < 2^31, got {p}")
    bases = np.asarray(bases, dtype=np.int64)
    k = bases.shape[1]
    sizes = (p - 1 - bases) // D + 1
    d = np.minimum(p, sizes.sum(axis=1) - k + 1)
    b_star = bases.sum(axis=1) % p
    offset = (np.asarray(g, dtype=np.int64) - b_star) % p * mod_inverse(D, p) % p
    return (offset < d) | (d >= p)
