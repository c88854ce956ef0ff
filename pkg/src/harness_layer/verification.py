"""
Verification

Purpose: Exhaustive and sampled oracles for the protocols and the sumset
lemmas they rely on.

Design Ideas:
- Everything runs through the numpy batch paths; rows are (instance, input tuple) cells
- Full enumeration when p^k <= ENUMERATION_LIMIT, seeded sampling above it
- Reports carry counts and maxima only, so the order cells are visited in never matters
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

import config
from src.additive_layer import dap_size, dist
from src.errors import OutOfRangeError, PromiseViolationError
from src.modular_layer import PrimeModulus
from src.protocol_layer import (
    FALLBACK_MODE,
    PublicRandomness,
    SumDistInstance,
    SumEqualInstance,
    bit_width,
    bits_per_party,
    count_separating_scalars,
    decide_batch,
    derive_c,
    derive_D,
    derive_D_eq,
    exact_error,
    in_dap_regime,
    run_sumdist,
    run_sumequal,
)

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    p: int
    k: int
    mode: str
    bits_per_party: int
    total_bits: int
    target_pairs: int
    runs: int
    errors: int
    sampled: bool

    @property
    def ok(self) -> bool:
        return self.errors == 0

    def as_record(self) -> Dict:
        return {**asdict(self), 'p': int(self.p)}


@dataclass
class ErrorReport:
    p: int
    k: int
    epsilon: Fraction
    mode: str
    D: Optional[int]
    trials: int
    max_error: Fraction
    mean_error: Fraction
    violations: int
    on_target_runs: int
    on_target_failures: int

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.on_target_failures == 0

    def as_record(self) -> Dict:
        return {**asdict(self), 'p': int(self.p)}


def _all_prefixes(p: int, width: int) -> np.ndarray:
    if width == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((p,) * width, dtype=np.int64)
    return grid.reshape(width, -1).T


def _target_pairs(p: int, max_pairs: Optional[int], rng: np.random.Generator) -> List[Tuple[int, int]]:
    total = p * (p - 1)
    if max_pairs is None or total <= max_pairs:
        return [(g0, g1) for g0 in range(p) for g1 in range(p) if g0 != g1]
    if total < config.MODULUS_CAP:
        picks = sorted(int(i) for i in rng.choice(total, size=max_pairs, replace=False))
        # index i -> (i // (p-1), i % (p-1)) with g1 skipping over g0
        return [(i // (p - 1), i % (p - 1) + (i % (p - 1) >= i // (p - 1))) for i in picks]
    pairs = []
    while len(pairs) < max_pairs:
        g0, g1 = (int(g) for g in rng.integers(0, p, size=2))
        if g0 != g1:
            pairs.append((g0, g1))
    return pairs


def exhaustive_verify_sumdist(p: int, k: int, limit: int = config.ENUMERATION_LIMIT,
                              samples: int = config.DEFAULT_SAMPLES,
                              max_pairs: Optional[int] = None,
                              seed: int = config.DEFAULT_SEED) -> VerificationReport:
    """
    Run SUM-DIST on every on-promise input (or a seeded sample) and count errors.

    Args:
        p: Prime modulus
        k: Number of parties
        limit: Full enumeration when p^k <= limit
        samples: Sampled tuples per target pair above the limit
        max_pairs: Cap on target pairs visited (all pairs when None)
        seed: Seed for sampling

    Returns:
        VerificationReport; errors must be 0
    """
    p = PrimeModulus(p)
    if p >= config.VECTOR_MODULUS_CAP and max_pairs is None:
        raise OutOfRangeError(f"p={p} is too large to visit every target pair; pass max_pairs")
    rng = np.random.default_rng(seed)
    sampled = p ** k > limit
    pairs = _target_pairs(p, max_pairs, rng)
    width = bits_per_party(p, k)
    runs = errors = 0

    for g0, g1 in pairs:
        instance = SumDistInstance(p, k, g0, g1)
        if p >= config.VECTOR_MODULUS_CAP:
            for _ in range(samples):
                prefix = [int(v) for v in rng.integers(0, p, size=k - 1)]
                bit = int(rng.integers(0, 2))
                target = (g0, g1)[bit]
                decision, _ = run_sumdist(instance, prefix + [(target - sum(prefix)) % p])
                runs += 1
                errors += decision != bit
            continue

        if sampled:
            prefix = rng.integers(0, p, size=(samples, k - 1), dtype=np.int64)
        else:
            prefix = _all_prefixes(p, k - 1)
        for bit, target in enumerate((g0, g1)):
            last = (target - prefix.sum(axis=1)) % p
            inputs = np.hstack([prefix, last[:, None]])
            decisions = decide_batch(instance, inputs)
            runs += len(decisions)
            errors += int(np.count_nonzero(decisions != bit))

    mode = SumDistInstance(p, k, 0, 1).mode
    logger.info("sumdist p=%d k=%d mode=%s runs=%d errors=%d", p, k, mode, runs, errors)
    return VerificationReport(p, k, mode, width, width * k, len(pairs), runs, errors, sampled)


def measure_error_sumequal(p: int, k: int, epsilon: Fraction, trials: int,
                           seed: int = config.DEFAULT_SEED) -> ErrorReport:
    """
    Exact error of SUM-EQUAL on random off-target inputs, plus one-sided checks.

    Each trial draws g and an off-target tuple and counts failing c over all
    of [1, p-1]. Another `trials` runs put on-target inputs through random
    seeds; every one of them must accept.
    """
    epsilon = Fraction(epsilon)
    rng = np.random.default_rng(seed)
    reference = SumEqualInstance(p, k, 0, epsilon)
    D = derive_D_eq(p, k, epsilon) if reference.mode != FALLBACK_MODE else None

    worst, total = Fraction(0), Fraction(0)
    violations = 0
    for _ in range(trials):
        g = int(rng.integers(0, p))
        inputs = [int(v) for v in rng.integers(0, p, size=k)]
        if sum(inputs) % p == g:
            inputs[-1] = (inputs[-1] + 1) % p
        profile = exact_error(SumEqualInstance(p, k, g, epsilon), inputs)
        worst = max(worst, profile.error)
        total += profile.error
        violations += profile.error > epsilon

    failures = 0
    for _ in range(trials):
        g = int(rng.integers(0, p))
        prefix = [int(v) for v in rng.integers(0, p, size=k - 1)]
        inputs = prefix + [(g - sum(prefix)) % p]
        pub = PublicRandomness(int(rng.integers(0, (1 << 63) - 1)))
        decision, _ = run_sumequal(SumEqualInstance(p, k, g, epsilon), inputs, pub)
        failures += decision != 1

    mean = total / trials if trials else Fraction(0)
    logger.info("sumequal p=%d k=%d eps=%s max_error=%s", p, k, epsilon, worst)
    return ErrorReport(int(p), k, epsilon, reference.mode, D, trials, worst, mean,
                       violations, trials, failures)


def check_lemmas(p: int, k: int, limit: int = config.ENUMERATION_LIMIT) -> Dict[str, int]:
    """
    Violation counts for the sumset facts behind SUM-DIST at (p, k).

    - scaling: dist(c*g0, c*g1) = (p-1)/2 for every distinct pair
    - sumset_size: every k-tuple of bases gives a sumset of at most (p-1)/2
      elements (all D^k tuples when that is within the limit)
    - bits: message width equals ceil(log2 D) and D <= 2kp/(p-3) + 1
    """
    counts = {'scaling': 0, 'sumset_size': 0, 'bits': 0}
    if not in_dap_regime(p, k):
        return counts
    D = derive_D(p, k)
    half = (p - 1) // 2
    for g0, g1 in itertools.permutations(range(p), 2):
        c = derive_c(p, D, g0, g1)
        counts['scaling'] += dist(c * g0 % p, c * g1 % p, D, p) != half

    if D ** k <= limit:
        bases = _all_prefixes(D, k)
        sizes = (p - 1 - bases) // D + 1
        counts['sumset_size'] = int(np.count_nonzero(sizes.sum(axis=1) - k + 1 > half))
    else:
        counts['sumset_size'] = int(k * dap_size(0, D, p) - k + 1 > half)

    counts['bits'] = int(bits_per_party(p, k) != bit_width(D)
                         or Fraction(D) > Fraction(2 * k * p, p - 3) + 1)
    return counts


def check_separating_scalars(p: int, xi: Fraction, D: int = 1) -> int:
    """
    Number of distinct pairs (g, g') with fewer than xi (p-1) separating scalars.
    """
    need = Fraction(xi) * (p - 1)
    return sum(1 for g, h in itertools.permutations(range(p), 2)
               if count_separating_scalars(p, D, g, h, xi) < need)


def check_sumequal_sizes(p: int, k: int, epsilon: Fraction,
                         limit: int = config.ENUMERATION_LIMIT) -> int:
    """
    Number of base tuples whose sumset reaches epsilon (p-1)/2 + 1 elements.
    """
    D = derive_D_eq(p, k, epsilon)
    bound = Fraction(epsilon) * Fraction(p - 1, 2) + 1
    if D ** k > limit:
        return int(k * dap_size(0, D, p) - k + 1 >= bound)
    bases = _all_prefixes(D, k)
    lengths = ((p - 1 - bases) // D + 1).sum(axis=1) - k + 1
    return int(np.count_nonzero(lengths >= math.ceil(bound)))


def _expected_bit(targets: Tuple[int, ...], total: int) -> int:
    if len(targets) == 1:
        return int(total == targets[0])
    if total not in targets:
        raise PromiseViolationError(
            f"inputs sum to {total}, neither g0={targets[0]} nor g1={targets[1]}")
    return 0 if total == targets[0] else 1


def integer_oracle(targets: Tuple[int, ...], inputs) -> int:
    """
    Decision bit the integer-sum oracle expects.

    One target asks SUM-EQUAL, two ask SUM-DIST; a SUM-DIST sum outside the
    pair raises PromiseViolationError.
    """
    return _expected_bit(targets, sum(inputs))


def modular_oracle(targets: Tuple[int, ...], inputs, N: int) -> int:
    """Same as integer_oracle with the sum taken mod N."""
    return _expected_bit(targets, sum(inputs) % N)
