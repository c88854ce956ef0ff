"""
Extension Layer

Purpose: Run the Z_p protocols over the integers and over Z_N for square-free N.

Design Ideas:
- Over Z: n-bit inputs sum to less than k*2^n, so working mod the next prime above k*2^n loses nothing
- Over Z_N: one sub-protocol per prime factor, all in the same round; CRT ties the answers together
- SUM-EQUAL over Z_N accepts iff every factor accepts; each factor gets epsilon/m and its own seed
- SUM-DIST over Z_N skips factors where g0 = g1 (mod p_i); they cannot tell the targets apart
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import config
from src.errors import ConfigError, EqualTargetsError, OutOfRangeError
from src.modular_layer import (
    CrtSystem,
    PrimeModulus,
    Residue,
    crt_combine,
    next_prime_above,
)
from src.protocol_layer import (
    CompositeTranscript,
    PublicRandomness,
    SumDistInstance,
    SumEqualInstance,
    Transcript,
    derive_seed,
    run_sumdist,
    run_sumequal,
)

logger = logging.getLogger(__name__)

SUMDIST = "sumdist"
SUMEQUAL = "sumequal"


def _check_problem(problem: str, targets: Tuple[int, ...],
                   epsilon: Optional[Fraction]) -> None:
    if problem == SUMDIST:
        if len(targets) != 2:
            raise ConfigError("SUM-DIST needs two targets g0, g1")
        if targets[0] == targets[1]:
            raise EqualTargetsError(f"g0 and g1 are both {targets[0]}")
    elif problem == SUMEQUAL:
        if len(targets) != 1:
            raise ConfigError("SUM-EQUAL needs one target g")
        if epsilon is None:
            raise ConfigError("SUM-EQUAL needs an error budget epsilon")
    else:
        raise ConfigError(f"unknown problem {problem!r}")


@dataclass(frozen=True)
class IntegerInstance:
    """SUM-DIST or SUM-EQUAL over Z with n-bit inputs."""

    n: int
    k: int
    problem: str
    targets: Tuple[int, ...]
    epsilon: Optional[Fraction] = None

    def __post_init__(self):
        if self.n < 1 or self.k < 2:
            raise OutOfRangeError(f"need n >= 1 and k >= 2, got n={self.n}, k={self.k}")
        object.__setattr__(self, 'targets', tuple(int(g) for g in self.targets))
        if self.epsilon is not None:
            object.__setattr__(self, 'epsilon', Fraction(self.epsilon))
        _check_problem(self.problem, self.targets, self.epsilon)
        top = self.k * ((1 << self.n) - 1)
        for g in self.targets:
            if not 0 <= g <= top:
                raise OutOfRangeError(f"target {g} outside [0, {top}]")


@dataclass(frozen=True)
class SquareFreeInstance:
    """SUM-DIST or SUM-EQUAL over Z_N, N the product of distinct odd primes."""

    factors: Tuple[int, ...]
    k: int
    problem: str
    targets: Tuple[int, ...]
    epsilon: Optional[Fraction] = None

    def __post_init__(self):
        if any(int(p) == 2 for p in self.factors):
            raise OutOfRangeError(
                f"even N is unsupported: factors {list(self.factors)} include 2; "
                "N must be odd and square-free")
        system = CrtSystem.of(self.factors)
        object.__setattr__(self, 'factors', tuple(PrimeModulus(p) for p in system.moduli))
        object.__setattr__(self, 'targets', tuple(int(g) for g in self.targets))
        if self.epsilon is not None:
            object.__setattr__(self, 'epsilon', Fraction(self.epsilon))
        if self.k < 2:
            raise OutOfRangeError(f"at least two parties are needed, got k={self.k}")
        _check_problem(self.problem, self.targets, self.epsilon)
        for g in self.targets:
            if not 0 <= g < self.N:
                raise OutOfRangeError(f"target {g} is not reduced mod {self.N}")

    @property
    def system(self) -> CrtSystem:
        return CrtSystem.of(self.factors)

    @property
    def N(self) -> int:
        return self.system.product

    def sub_instances(self) -> List[Tuple[int, Union[SumDistInstance, SumEqualInstance]]]:
        """
        (factor index, Z_p instance) pairs that take part in a run.
        """
        m = len(self.factors)
        subs = []
        for i, p in enumerate(self.factors):
            if self.problem == SUMEQUAL:
                subs.append((i, SumEqualInstance(p, self.k, self.targets[0] % p, self.epsilon / m)))
                continue
            g0, g1 = (g % p for g in self.targets)
            if g0 == g1:
                logger.debug("factor %d: g0 = g1 = %d, skipped", p, g0)
                continue
            subs.append((i, SumDistInstance(p, self.k, g0, g1)))
        return subs


def lift_to_prime(instance: IntegerInstance) -> Union[SumDistInstance, SumEqualInstance]:
    """
    The Z_p instance with p the smallest prime above k * 2^n.

    Sums of n-bit inputs stay below p, so a sum equals g over Z iff it does mod p.
    """
    bound = instance.k << instance.n
    if bound >= config.MODULUS_CAP:
        raise OutOfRangeError(f"k * 2^n = {bound} is not below 2^62")
    p = next_prime_above(bound)
    logger.debug("lifting n=%d k=%d to p=%d", instance.n, instance.k, p)
    if instance.problem == SUMDIST:
        return SumDistInstance(p, instance.k, *instance.targets)
    return SumEqualInstance(p, instance.k, instance.targets[0], instance.epsilon)


def run_over_Z(instance: IntegerInstance, inputs: Sequence[int],
               seed: int = config.DEFAULT_SEED) -> Tuple[int, Transcript]:
    """
    Run the lifted Z_p protocol on n-bit integer inputs.

    Args:
        instance: The integer instance
        inputs: One n-bit integer per party
        seed: Public seed, used by SUM-EQUAL only

    Returns:
        (decision bit, transcript of the Z_p run)
    """
    for x in inputs:
        if not 0 <= x < 1 << instance.n:
            raise OutOfRangeError(f"input {x} is not an {instance.n}-bit integer")
    lifted = lift_to_prime(instance)
    if isinstance(lifted, SumDistInstance):
        return run_sumdist(lifted, inputs)
    return run_sumequal(lifted, inputs, PublicRandomness(seed))


def run_over_ZN(instance: SquareFreeInstance, inputs: Sequence[int],
                seed: int = config.DEFAULT_SEED) -> Tuple[int, CompositeTranscript]:
    """
    One sub-protocol per prime factor of N, combined by CRT.

    Args:
        instance: The square-free instance
        inputs: One residue mod N per party
        seed: Master public seed; factor i runs with derive_seed(seed, i)

    Returns:
        (decision bit, composite transcript of the factor runs)
    """
    N = instance.N
    for x in inputs:
        if not 0 <= x < N:
            raise OutOfRangeError(f"input {x} is not reduced mod {N}")

    decisions = {}
    transcripts = []
    for i, sub in instance.sub_instances():
        local = [x % sub.p for x in inputs]
        if isinstance(sub, SumEqualInstance):
            bit, transcript = run_sumequal(sub, local, PublicRandomness(derive_seed(seed, i)))
        else:
            bit, transcript = run_sumdist(sub, local)
        decisions[i] = bit
        transcripts.append(transcript)
    composite = CompositeTranscript(transcripts)

    if instance.problem == SUMEQUAL:
        return int(all(decisions.values())), composite
    return _combine_sumdist(instance, decisions), composite


def _combine_sumdist(instance: SquareFreeInstance, decisions: dict) -> int:
    """
    Rebuild the decided sum by CRT and match it against g0 and g1.
    """
    g0, g1 = instance.targets
    residues = []
    for i, p in enumerate(instance.factors):
        target = instance.targets[decisions.get(i, 0)]
        residues.append(Residue.of(target, p))
    decided = crt_combine(residues, instance.system).value
    if decided == g0:
        return 0
    if decided == g1:
        return 1
    first = decisions[min(decisions)]
    logger.warning("factor decisions disagree (off-promise inputs); reporting factor %d's bit",
                   instance.factors[min(decisions)])
    return first
