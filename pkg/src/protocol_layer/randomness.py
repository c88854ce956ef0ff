"""
Public randomness

A shared 64-bit seed stands in for the public random string. Every party and
the coordinator expand it with SplitMix64 and draw the scaling constant c by
rejection sampling, so all of them agree on c without talking. The seed is
public and is not counted as communication.
"""

from dataclasses import dataclass

from src.errors import OutOfRangeError

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood). Fixed constants, identical in every language."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)


@dataclass(frozen=True)
class PublicRandomness:
    seed: int

    def __post_init__(self):
        if not 0 <= self.seed <= _MASK:
            raise OutOfRangeError(f"seed {self.seed} is not a 64-bit unsigned integer")


def sample_c(pub: PublicRandomness, p: int) -> int:
    """
    Uniform c in [1, p-1] from the shared seed.

    Draws above the largest multiple of p-1 below 2^64 are rejected so the
    reduction is unbiased.
    """
    m = p - 1
    limit = (1 << 64) - (1 << 64) % m
    gen = SplitMix64(pub.seed)
    while True:
        w = gen.next()
        if w < limit:
            return 1 + w % m


def derive_seed(master: int, index: int) -> int:
    """Seed for sub-run `index`: the (index+1)-th output of SplitMix64(master)."""
    gen = SplitMix64(master)
    for _ in range(index):
        gen.next()
    return gen.next()
