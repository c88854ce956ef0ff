"""
Tests for the deterministic SUM-DIST protocol.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.additive_layer import DAP, dist, sumset_interval
from src.errors import (
    ArityMismatchError,
    EqualTargetsError,
    OutOfRangeError,
    TrivialRegimeError,
)
from src.protocol_layer import (
    DAP_MODE,
    FALLBACK_MODE,
    SumDistInstance,
    SumDistParams,
    bit_width,
    bits_per_party,
    coordinator_decide,
    decide_batch,
    derive_c,
    derive_D,
    derive_params,
    on_promise,
    party_message,
    run_sumdist,
)

REGIME_PRIMES = [11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101]


@pytest.mark.parametrize("p,k,expected", [(19, 2, 5), (19, 4, 10)])
def test_derive_D_examples(p, k, expected):
    assert derive_D(p, k) == expected


@pytest.mark.parametrize("p,k", [(5, 2), (7, 2), (19, 5), (3, 2)])
def test_derive_D_outside_regime(p, k):
    with pytest.raises(TrivialRegimeError):
        derive_D(p, k)


@pytest.mark.parametrize("p,D,g0,g1,expected", [(19, 7, 2, 5, 2), (19, 5, 3, 10, 1)])
def test_derive_c_examples(p, D, g0, g1, expected):
    c = derive_c(p, D, g0, g1)
    assert c == expected
    assert dist(c * g0 % p, c * g1 % p, D, p) == (p - 1) // 2


def test_derive_c_equal_targets():
    with pytest.raises(EqualTargetsError):
        derive_c(19, 5, 4, 4)


@given(st.sampled_from(REGIME_PRIMES), st.data())
def test_derive_c_puts_targets_half_way_apart(p, data):
    D = data.draw(st.integers(min_value=1, max_value=p - 1))
    g0, g1 = data.draw(st.lists(st.integers(min_value=0, max_value=p - 1),
                                min_size=2, max_size=2, unique=True))
    c = derive_c(p, D, g0, g1)
    assert c != 0
    assert dist(c * g0 % p, c * g1 % p, D, p) == (p - 1) // 2


def test_party_message_examples():
    params = SumDistParams(19, 1, 5)
    assert party_message(4, params) == 4
    assert party_message(6, params) == 1
    assert party_message(0, SumDistParams(19, 13, 7)) == 0


def test_coordinator_worked_example():
    instance = SumDistInstance(19, 2, 3, 10)
    params = derive_params(instance)
    assert (params.c, params.D) == (1, 5)

    bases = [party_message(x, params) for x in (4, 6)]
    assert bases == [4, 1]
    s = sumset_interval([DAP(19, 5, b) for b in bases])
    assert (s.start, s.length) == (5, 6)
    assert coordinator_decide(bases, instance, params) == 1

    assert coordinator_decide([party_message(x, params) for x in (1, 2)], instance, params) == 0
    with pytest.raises(ArityMismatchError):
        coordinator_decide([4], instance, params)


def test_run_sumdist_transcript():
    decision, transcript = run_sumdist(SumDistInstance(19, 2, 3, 10), [4, 6])
    assert decision == 1
    assert transcript.values == [4, 1]
    assert transcript.width == 3
    assert transcript.total_bits == 6
    assert transcript.header['mode'] == DAP_MODE
    assert (transcript.header['D'], transcript.header['c']) == (5, 1)


def test_fallback_sends_raw_residues():
    instance = SumDistInstance(5, 2, 1, 3)
    assert instance.mode == FALLBACK_MODE
    decision, transcript = run_sumdist(instance, [2, 4])
    assert transcript.values == [2, 4]
    assert transcript.total_bits == 6
    assert decision == 0
    assert run_sumdist(instance, [1, 2])[0] == 1

    assert SumDistInstance(7, 2, 0, 1).mode == FALLBACK_MODE
    assert SumDistInstance(11, 2, 0, 1).mode == DAP_MODE


def test_instance_validation():
    with pytest.raises(EqualTargetsError):
        SumDistInstance(19, 2, 4, 4)
    with pytest.raises(OutOfRangeError):
        SumDistInstance(19, 1, 0, 1)
    with pytest.raises(OutOfRangeError):
        SumDistInstance(19, 2, 0, 19)
    with pytest.raises(OutOfRangeError):
        SumDistInstance(21, 2, 0, 1)


def test_run_sumdist_rejects_bad_inputs():
    instance = SumDistInstance(19, 2, 3, 10)
    with pytest.raises(ArityMismatchError):
        run_sumdist(instance, [1, 2, 3])
    with pytest.raises(OutOfRangeError):
        run_sumdist(instance, [1, 19])


def test_on_promise():
    instance = SumDistInstance(19, 2, 3, 10)
    assert on_promise(instance, [4, 6])
    assert on_promise(instance, [1, 2])
    assert not on_promise(instance, [1, 1])


@pytest.mark.parametrize("p", [11, 13, 17])
def test_zero_error_exhaustive_small(p):
    k = 2
    for g0, g1 in itertools.permutations(range(p), 2):
        instance = SumDistInstance(p, k, g0, g1)
        for x0 in range(p):
            assert run_sumdist(instance, [x0, (g0 - x0) % p])[0] == 0
            assert run_sumdist(instance, [x0, (g1 - x0) % p])[0] == 1


@given(st.sampled_from(REGIME_PRIMES), st.data())
def test_zero_error_on_random_promise_inputs(p, data):
    k = data.draw(st.integers(min_value=2, max_value=(p - 1) // 4))
    g0, g1 = data.draw(st.lists(st.integers(min_value=0, max_value=p - 1),
                                min_size=2, max_size=2, unique=True))
    bit = data.draw(st.integers(min_value=0, max_value=1))
    prefix = data.draw(st.lists(st.integers(min_value=0, max_value=p - 1),
                                min_size=k - 1, max_size=k - 1))
    inputs = prefix + [((g0, g1)[bit] - sum(prefix)) % p]
    decision, transcript = run_sumdist(SumDistInstance(p, k, g0, g1), inputs)
    assert decision == bit
    assert transcript.total_bits == k * bit_width(derive_D(p, k))


def test_every_base_tuple_fits_in_half_the_field():
    for p in (11, 13, 17, 19, 23):
        for k in range(2, (p - 1) // 4 + 1):
            D = derive_D(p, k)
            if D ** k > 20000:
                continue
            for bases in itertools.product(range(D), repeat=k):
                s = sumset_interval([DAP(p, D, b) for b in bases])
                assert s.length <= (p - 1) // 2


def test_communication_bound():
    for p in REGIME_PRIMES + [1009, 1000003]:
        for k in range(2, min((p - 1) // 4, 300) + 1):
            D = derive_D(p, k)
            assert Fraction(D) <= Fraction(2 * k * p, p - 3) + 1
            assert D <= 4 * k
            assert bits_per_party(p, k) == bit_width(D)


def test_bits_per_party_independent_of_p():
    for k in range(2, 65):
        widths = {bits_per_party(p, k) for p in (1009, 1000003, (1 << 61) - 1)}
        assert len(widths) == 1, k
    assert derive_D((1 << 61) - 1, 16) == 33
    assert bits_per_party((1 << 61) - 1, 16) == 6


def test_bits_per_party_fallback():
    assert bits_per_party(7, 2) == bit_width(7) == 3


def test_decide_batch_agrees_with_run_sumdist():
    rng = np.random.default_rng(11)
    for p, k, g0, g1 in [(19, 2, 3, 10), (31, 3, 0, 30), (7, 2, 1, 2), (101, 5, 17, 4)]:
        instance = SumDistInstance(p, k, g0, g1)
        inputs = rng.integers(0, p, size=(300, k))
        batch = decide_batch(instance, inputs)
        for row, bit in zip(inputs, batch):
            assert run_sumdist(instance, [int(x) for x in row])[0] == int(bit)


def test_decide_batch_shape_check():
    with pytest.raises(ArityMismatchError):
        decide_batch(SumDistInstance(19, 2, 3, 10), np.zeros((4, 3), dtype=np.int64))
