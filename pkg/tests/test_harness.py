"""
Tests for the harness: exhaustive oracles, error measurement, the lower-bound
adversary, communication tables and report rendering.
"""

import json
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest

from src.errors import (
    DegenerateTargetsError,
    MixedParametersError,
    OutOfRangeError,
    PromiseViolationError,
)
from src.harness_layer import (
    PartitionProtocol,
    attack_random_protocols,
    build_document,
    check_lemmas,
    check_separating_scalars,
    check_sumequal_sizes,
    comm_table,
    exhaustive_verify_sumdist,
    find_counterexample,
    integer_oracle,
    jsonable,
    lower_bound_bits,
    max_silent_bits,
    measure_error_sumequal,
    modular_oracle,
    random_partition_protocol,
    render_table,
    replay,
    sumdist_partition_protocol,
    to_records,
)
from src.modular_layer import is_prime
from src.protocol_layer import DAP_MODE, FALLBACK_MODE, SumDistInstance

PRIMES_7_TO_31 = [7, 11, 13, 17, 19, 23, 29, 31]


# Exhaustive SUM-DIST oracle

def test_verify_small_fallback_prime():
    report = exhaustive_verify_sumdist(7, 2)
    assert report.mode == FALLBACK_MODE
    assert report.target_pairs == 42
    assert report.runs == 42 * 7 * 2
    assert report.errors == 0
    assert not report.sampled


def test_verify_p5_fallback():
    report = exhaustive_verify_sumdist(5, 2)
    assert report.ok
    assert report.total_bits == 6


def test_verify_sampled():
    report = exhaustive_verify_sumdist(19, 3, limit=1000, samples=2000, max_pairs=20, seed=4)
    assert report.sampled
    assert report.mode == DAP_MODE
    assert report.target_pairs == 20
    assert report.runs == 20 * 2000 * 2
    assert report.errors == 0


def test_verify_large_prime_uses_the_scalar_path():
    p = (1 << 61) - 1
    report = exhaustive_verify_sumdist(p, 16, samples=20, max_pairs=5, seed=1)
    assert report.errors == 0
    assert report.bits_per_party == 6
    with pytest.raises(OutOfRangeError):
        exhaustive_verify_sumdist(p, 16, samples=1)


def test_verify_k2_exhaustive_quick():
    for p in (11, 13):
        assert exhaustive_verify_sumdist(p, 2).errors == 0


@pytest.mark.slow
def test_verify_zero_error_acceptance():
    for p in PRIMES_7_TO_31:
        for k in (2, 3):
            report = exhaustive_verify_sumdist(p, k)
            assert report.errors == 0 and not report.sampled, (p, k)


@pytest.mark.slow
@pytest.mark.parametrize("p", [p for p in PRIMES_7_TO_31 if 4 * 4 < p])
def test_verify_k4_sampled_over_every_target_pair(p):
    # limit below p^4 forces 10^5 sampled tuples per target pair
    report = exhaustive_verify_sumdist(p, 4, limit=p ** 3, samples=10**5)
    assert report.sampled and report.mode == DAP_MODE
    assert report.target_pairs == p * (p - 1)
    assert report.runs == p * (p - 1) * 2 * 10**5
    assert report.errors == 0


def test_check_lemmas():
    for p in PRIMES_7_TO_31:
        for k in (2, 3, 4):
            assert check_lemmas(p, k) == {'scaling': 0, 'sumset_size': 0, 'bits': 0}


def test_check_lemmas_on_large_prime_uses_the_worst_case():
    assert check_lemmas(101, 3, limit=10) == {'scaling': 0, 'sumset_size': 0, 'bits': 0}


def test_separating_scalars_small():
    for p in (7, 11, 13):
        for xi in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            assert check_separating_scalars(p, xi) == 0
            assert check_separating_scalars(p, xi, D=3) == 0


@pytest.mark.slow
def test_separating_scalars_acceptance():
    for p in (q for q in range(3, 102) if is_prime(q)):
        for xi in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            for D in (d for d in (1, 3) if d < p):
                assert check_separating_scalars(p, xi, D=D) == 0, (p, xi, D)


def test_check_sumequal_sizes():
    assert check_sumequal_sizes(19, 2, Fraction(1, 2)) == 0
    assert check_sumequal_sizes(101, 3, Fraction(1, 10)) == 0
    assert check_sumequal_sizes(31, 3, Fraction(1, 2)) == 0


# SUM-EQUAL error measurement

def test_measure_error_small():
    report = measure_error_sumequal(19, 2, Fraction(1, 2), trials=200, seed=3)
    assert report.mode == DAP_MODE
    assert report.D == 10
    assert report.max_error <= Fraction(1, 2)
    assert report.mean_error <= report.max_error
    assert report.on_target_failures == 0
    assert report.ok


def test_measure_error_in_fallback():
    report = measure_error_sumequal(19, 2, Fraction(1, 4), trials=50)
    assert report.mode == FALLBACK_MODE
    assert report.D is None
    assert report.max_error == 0
    assert report.ok


@pytest.mark.slow
def test_measure_error_acceptance():
    for p, k, eps in [(19, 2, Fraction(1, 2)), (31, 2, Fraction(1, 3)), (101, 3, Fraction(1, 10)),
                      (101, 2, Fraction(1, 20)), (61, 4, Fraction(1, 3))]:
        report = measure_error_sumequal(p, k, eps, trials=1000, seed=p)
        assert report.ok, (p, k, eps)


# Lower bound

@pytest.mark.parametrize("p,k,expected", [(11, 5, 1), (31, 9, 2), (31, 2, -1), (7, 3, 0), (3, 9, 0)])
def test_max_silent_bits(p, k, expected):
    assert max_silent_bits(p, k) == expected


def test_partition_protocol_validation():
    with pytest.raises(MixedParametersError):
        PartitionProtocol(11, 3, 1, np.zeros((2, 11)))
    with pytest.raises(OutOfRangeError):
        PartitionProtocol(11, 3, 1, np.full((3, 11), 2))
    with pytest.raises(OutOfRangeError):
        PartitionProtocol(12, 3, 1, np.zeros((3, 12)))


def test_heaviest_class_breaks_ties_low():
    labels = np.array([[0, 1, 1, 0, 1, 0, 2], [3] * 7])
    proto = PartitionProtocol(7, 2, 2, labels)
    label, members = proto.heaviest_class(0)
    assert label == 0
    assert list(members) == [0, 3, 5]


def test_counterexample_on_p11_k5_t1():
    rng = np.random.default_rng(1)
    for _ in range(100):
        proto = random_partition_protocol(11, 5, 1, rng)
        ce = find_counterexample(proto, 0, 1)
        assert ce is not None
        assert replay(ce, proto)
        assert ce.x[-1] == ce.x_prime[-1] == ce.x_k
        assert sum(ce.x) % 11 == 0 and sum(ce.x_prime) % 11 == 1


def test_degenerate_targets():
    proto = random_partition_protocol(11, 5, 1, np.random.default_rng(0))
    with pytest.raises(DegenerateTargetsError):
        find_counterexample(proto, 3, 14)


def test_replay_rejects_a_tampered_counterexample():
    proto = random_partition_protocol(11, 5, 1, np.random.default_rng(2))
    ce = find_counterexample(proto, 2, 7)
    tampered = type(ce)(ce.messages, ce.x, ce.x, ce.x_k, ce.g0, ce.g1)
    assert replay(ce, proto)
    assert not replay(tampered, proto)


def test_sumdist_protocol_admits_no_counterexample():
    for p, k, g0, g1 in [(101, 3, 0, 1), (31, 5, 7, 2), (11, 5, 0, 1)]:
        proto = sumdist_partition_protocol(SumDistInstance(p, k, g0, g1))
        assert find_counterexample(proto, g0, g1) is None


def test_attack_random_protocols():
    report = attack_random_protocols(11, 5, 1, count=100, seed=1)
    assert report.in_regime
    assert report.found == report.verified == 100
    assert report.ok

    above = attack_random_protocols(31, 3, 3, count=20, seed=1)
    assert not above.in_regime
    assert above.verified == above.found
    assert above.ok


@pytest.mark.slow
def test_lower_bound_acceptance():
    for p in [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]:
        for k in range(2, 10):
            for t in range(0, max_silent_bits(p, k) + 1):
                report = attack_random_protocols(p, k, t, count=100, seed=p * 100 + k)
                assert report.found == report.verified == 100, (p, k, t)


# Communication table

def test_comm_table_row():
    table, _ = comm_table([19], [2])
    row = table.iloc[0]
    assert row['D'] == 5
    assert row['bits_per_party'] == 3
    assert row['total_bits'] == 6
    assert row['trivial_bits'] == 10
    assert bool(row['d_bound_ok'])


def test_comm_table_large_prime():
    table, fitted = comm_table([(1 << 61) - 1], [16])
    row = table.iloc[0]
    assert row['D'] <= 64
    assert row['bits_per_party'] <= 6
    assert fitted >= 0


def test_comm_table_bits_independent_of_p():
    table, _ = comm_table([1009, 1000003, (1 << 61) - 1], range(2, 17))
    assert (table.groupby('k')['bits_per_party'].nunique() == 1).all()
    assert table['d_bound_ok'].all()


def test_comm_table_fallback_rows():
    table, _ = comm_table([7], [2])
    assert table.iloc[0]['mode'] == FALLBACK_MODE
    assert pd.isna(table.iloc[0]['D'])


def test_comm_table_sumequal():
    table, _ = comm_table([19, 101], [2, 3], epsilon=Fraction(1, 2))
    assert set(table['problem']) == {'sumequal'}
    assert table[(table['p'] == 19) & (table['k'] == 2)].iloc[0]['D'] == 10


def test_comm_table_preconditions():
    with pytest.raises(OutOfRangeError):
        comm_table([19], [1])
    with pytest.raises(OutOfRangeError):
        comm_table([19], [2], epsilon=Fraction(3, 2))


def test_lower_bound_bits():
    assert lower_bound_bits(19, 2) == 0
    assert lower_bound_bits(1009, 16) == 48


# Oracles and reports

def test_oracles():
    assert integer_oracle((10, 20), [4, 6]) == 0
    assert integer_oracle((10, 20), [14, 6]) == 1
    assert integer_oracle((3,), [1, 2]) == 1
    assert modular_oracle((3,), [7, 11], 15) == 1
    assert modular_oracle((3,), [1, 1], 15) == 0


def test_oracles_reject_off_promise_sums():
    with pytest.raises(PromiseViolationError):
        integer_oracle((5, 7), [1, 1])
    with pytest.raises(PromiseViolationError):
        modular_oracle((0, 1), [3, 4], 15)
    # single target: every sum is a valid question
    assert integer_oracle((5,), [1, 1]) == 0


def test_jsonable():
    assert jsonable(Fraction(1, 3)) == '1/3'
    assert jsonable(np.int64(4)) == 4
    assert jsonable(np.bool_(True)) is True
    assert jsonable(pd.NA) is None
    assert jsonable({'x': [np.float64(0.5)]}) == {'x': [0.5]}


def test_document_is_deterministic_and_self_describing():
    table, fitted = comm_table([19], [2, 3])
    records = to_records(table)
    first = build_document('table', {'p': '19'}, records, {'fitted_C': fitted})
    second = build_document('table', {'p': '19'}, to_records(comm_table([19], [2, 3])[0]),
                            {'fitted_C': fitted})
    assert first == second
    document = json.loads(first)
    assert document['schema_version'] == 1
    assert document['command'] == 'table'
    assert len(document['records']) == 2


def test_render_table():
    text = render_table([{'p': 19, 'k': 2}], {'ok': True}, title='demo')
    lines = text.splitlines()
    assert lines[0] == 'demo'
    assert 'ok: True' in lines
