"""
Modular Layer

Purpose: Exact arithmetic over odd primes and square-free composites.

Design Ideas:
- Residues and prime moduli are small validated value types, everything else is plain int
- Primality is deterministic Miller-Rabin with a witness set complete below 2^64
- Inverses come from extended Euclid so they work for any modulus (CRT coefficients included)
- Moduli are capped at 2^62; Python ints keep every product exact
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import config
from src.errors import (
    LengthMismatchError,
    MixedParametersError,
    NotSquareFreeError,
    OutOfRangeError,
    ZeroInverseError,
)

logger = logging.getLogger(__name__)

_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Residue:
    """An element of Z_m, always stored reduced."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise OutOfRangeError(f"modulus must be at least 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise OutOfRangeError(f"{self.value} is not reduced mod {self.modulus}")

    @classmethod
    def of(cls, value: int, modulus: int) -> "Residue":
        return cls(value % modulus, modulus)

    def __int__(self) -> int:
        return self.value


class PrimeModulus(int):
    """An odd prime below 2^62. Behaves as an int everywhere."""

    def __new__(cls, p: int):
        p = int(p)
        if p < 3 or p >= config.MODULUS_CAP or not is_prime(p):
            raise OutOfRangeError(f"{p} is not an odd prime below 2^62")
        return super().__new__(cls, p)


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """
    Extended GCD.

    Returns:
        (g, x, y) with a*x + b*y = g = gcd(a, b)
    """
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    return old_r, old_x, old_y


def mod_inverse(a: int, m: int) -> int:
    """
    Multiplicative inverse of a modulo m.

    Args:
        a: Value to invert (any int, reduced first)
        m: Modulus, prime or composite

    Returns:
        b in [0, m) with a*b = 1 (mod m)
    """
    a = int(a) % m
    if a == 0:
        raise ZeroInverseError(f"0 has no inverse mod {m}")
    g, x, _ = xgcd(a, m)
    if g != 1:
        raise ZeroInverseError(f"{a} is not invertible mod {m} (gcd {g})")
    return x % m


def _miller_rabin_round(n: int, d: int, r: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """
    Deterministic primality test for 2 <= n < 2^62.
    """
    if not 2 <= n < config.MODULUS_CAP:
        raise OutOfRangeError(f"is_prime is defined on [2, 2^62), got {n}")
    if n in _WITNESSES:
        return True
    if any(n % w == 0 for w in _WITNESSES):
        return False

    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    return all(_miller_rabin_round(n, d, r, a) for a in _WITNESSES)


def next_prime_above(n: int) -> PrimeModulus:
    """
    Smallest prime strictly greater than n.

    Args:
        n: Lower bound, n >= 2

    Returns:
        The prime, as a PrimeModulus
    """
    if n < 2:
        raise OutOfRangeError(f"next_prime_above needs n >= 2, got {n}")
    candidate = n + 1
    if candidate % 2 == 0:
        candidate += 1
    while candidate < config.MODULUS_CAP:
        if is_prime(candidate):
            logger.debug("next prime above %d is %d", n, candidate)
            return PrimeModulus(candidate)
        candidate += 2
    raise OutOfRangeError(f"no prime above {n} fits below 2^62")


@dataclass(frozen=True)
class CrtSystem:
    """Pairwise distinct primes p_1..p_m; their product N is square-free."""

    moduli: Tuple[int, ...]

    def __post_init__(self):
        if not self.moduli:
            raise LengthMismatchError("a CRT system needs at least one modulus")
        if len(set(self.moduli)) != len(self.moduli):
            raise NotSquareFreeError(f"repeated prime factor in {list(self.moduli)}")
        for p in self.moduli:
            if p < 2 or not is_prime(p):
                raise OutOfRangeError(f"CRT modulus {p} is not prime")

    @classmethod
    def of(cls, moduli: Sequence[int]) -> "CrtSystem":
        return cls(tuple(int(p) for p in moduli))

    @property
    def product(self) -> int:
        return math.prod(self.moduli)

    def residues_of(self, x: int) -> List[Residue]:
        return [Residue.of(x, p) for p in self.moduli]


def crt_combine(residues: Sequence[Residue], system: CrtSystem) -> Residue:
    """
    Recombine per-prime residues into the unique residue mod N.

    Args:
        residues: One residue per modulus, in the system's order
        system: The CRT system

    Returns:
        x in [0, N) reducing to every input
    """
    if len(residues) != len(system.moduli):
        raise LengthMismatchError(
            f"{len(residues)} residues for {len(system.moduli)} moduli"
        )
    n = system.product
    x = 0
    for residue, p in zip(residues, system.moduli):
        if residue.modulus != p:
            raise MixedParametersError(
                f"residue mod {residue.modulus} supplied for modulus {p}"
            )
        cofactor = n // p
        x += residue.value * cofactor * mod_inverse(cofactor, p)
    return Residue(x % n, n)
