"""
Tests for the command line front end.
"""

import json
from fractions import Fraction

import pytest

import config
from src.main import main, parse_int_list, parse_rational
from src.errors import ConfigError
from src.storage_layer import ReportStorage


def run_structured(capsys, *argv):
    code = main(list(argv) + ['--format', 'structured'])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_sumdist_worked_example(capsys):
    code, doc = run_structured(capsys, 'sumdist', '--p', '19', '--k', '2', '--g0', '3', '--g1', '10',
                               '--inputs', '4,6')
    assert code == 0
    assert doc['command'] == 'sumdist'
    assert doc['summary']['decision'] == 1
    assert doc['summary']['total_bits'] == 6
    assert doc['summary']['trivial_bits'] == 10
    assert doc['records'][0]['D'] == 5
    assert doc['config']['inputs'] == '4,6'


def test_sumdist_table_output(capsys):
    code = main(['sumdist', '--p', '19', '--k', '2', '--g0', '3', '--g1', '10', '--inputs', '1,2',
                 '--format', 'table'])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == 'sumdist'
    assert 'decision: 0' in out


def test_missing_target_is_a_usage_error(capsys):
    assert main(['sumdist', '--p', '19', '--k', '2', '--g0', '3', '--inputs', '4,6']) == 2


def test_off_promise_inputs_are_flagged(capsys):
    code = main(['sumdist', '--p', '19', '--k', '2', '--g0', '3', '--g1', '10', '--inputs', '1,1',
                 '--format', 'structured'])
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(captured.out)['records'][0]['promise'] == 'off-promise'
    assert 'off-promise' in captured.err


def test_library_errors_exit_2(capsys):
    assert main(['sumdist', '--p', '19', '--k', '2', '--g0', '3', '--g1', '3', '--inputs', '4,6']) == 2
    assert 'g0 and g1' in capsys.readouterr().err
    assert main(['sumdist', '--p', '21', '--k', '2', '--g0', '3', '--g1', '4', '--inputs', '4,6']) == 2


def test_sumequal_replay_is_byte_identical(capsys):
    argv = ['sumequal', '--p', '19', '--k', '2', '--g', '3', '--eps', '1/2', '--seed', '7',
            '--inputs', '4,6', '--format', 'structured']
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first


def test_sumequal_exact_error(capsys):
    code, doc = run_structured(capsys, 'sumequal', '--p', '19', '--k', '2', '--g', '3', '--eps', '1/2',
                               '--seed', '7', '--inputs', '4,6', '--exact-error')
    assert code == 0
    assert Fraction(doc['summary']['exact_error']) <= Fraction(1, 2)
    assert doc['summary']['error_within_epsilon'] is True


def test_sumequal_on_target_accepts_for_any_seed(capsys):
    for seed in (0, 1, 99, 2**63):
        code, doc = run_structured(capsys, 'sumequal', '--p', '19', '--k', '2', '--g', '3',
                                   '--eps', '1/2', '--seed', str(seed), '--inputs', '1,2')
        assert code == 0
        assert doc['summary']['decision'] == 1


def test_sumequal_fallback_is_a_notice_not_an_error(capsys):
    code = main(['sumequal', '--p', '19', '--k', '2', '--g', '3', '--eps', '1/4', '--inputs', '4,6'])
    assert code == 0
    assert 'trivial protocol' in capsys.readouterr().err


def test_decimal_epsilon_is_rejected(capsys):
    code = main(['sumequal', '--p', '19', '--k', '2', '--g', '3', '--eps', '0.5', '--inputs', '4,6'])
    assert code == 2
    assert "'a/b'" in capsys.readouterr().err


def test_over_z(capsys):
    code, doc = run_structured(capsys, 'over-z', '--n', '4', '--k', '2', '--g0', '10', '--g1', '20',
                               '--inputs', '4,6')
    assert code == 0
    assert doc['summary']['decision'] == doc['summary']['oracle'] == 0
    assert doc['records'][0]['p'] == 37


def test_over_z_off_promise_has_no_oracle_bit(capsys):
    code = main(['over-z', '--n', '4', '--k', '2', '--g0', '10', '--g1', '20',
                 '--inputs', '1,1', '--format', 'structured'])
    captured = capsys.readouterr()
    assert code == 0
    assert json.loads(captured.out)['summary']['oracle'] is None
    assert 'off-promise' in captured.err


def test_over_z_sumequal_needs_epsilon(capsys):
    code = main(['over-z', '--n', '4', '--k', '2', '--problem', 'sumequal', '--g', '3', '--inputs', '1,2'])
    assert code == 2


def test_over_zn(capsys):
    code, doc = run_structured(capsys, 'over-zn', '--factors', '3,5', '--k', '2', '--problem', 'sumequal',
                               '--g', '3', '--eps', '1/2', '--inputs', '7,11')
    assert code == 0
    assert doc['summary']['N'] == 15
    assert doc['summary']['decision'] == 1
    assert len(doc['records']) == 2


def test_over_zn_rejects_repeated_factors(capsys):
    code = main(['over-zn', '--factors', '3,3', '--k', '2', '--problem', 'sumequal', '--g', '3',
                 '--eps', '1/2', '--inputs', '1,1'])
    assert code == 2


def test_over_zn_rejects_even_N(capsys):
    code = main(['over-zn', '--factors', '2,3', '--k', '2', '--g0', '0', '--g1', '1',
                 '--inputs', '1,1'])
    assert code == 2
    assert 'even N is unsupported' in capsys.readouterr().err


def test_verify_small(capsys):
    code, doc = run_structured(capsys, 'verify', '--p-max', '13', '--k-max', '2')
    assert code == 0
    assert doc['summary']['violations'] == 0
    assert [r['p'] for r in doc['records']] == [7, 11, 13]


@pytest.mark.slow
def test_verify_acceptance(capsys):
    assert main(['verify', '--p-max', '31', '--k-max', '4']) == 0


def test_error_command(capsys):
    code, doc = run_structured(capsys, 'error', '--p', '19', '--k', '2', '--eps', '1/2', '--trials', '50')
    assert code == 0
    assert Fraction(doc['summary']['max_error']) <= Fraction(1, 2)


def test_lowerbound_command(capsys):
    code, doc = run_structured(capsys, 'lowerbound', '--p', '11', '--k', '5', '--t', '1',
                               '--random-protocols', '100', '--seed', '1', '--against-sumdist')
    assert code == 0
    assert doc['summary']['counterexamples'] == '100/100'
    assert doc['summary']['sumdist_counterexample'] is False


def test_table_command(capsys):
    code, doc = run_structured(capsys, 'table', '--k', '2..16', '--p', '1009,1000003')
    assert code == 0
    assert doc['summary']['bits_constant_in_p'] is True
    assert len(doc['records']) == 30
    assert doc['records'][0]['D'] == 5


def test_archive(tmp_path, capsys):
    db = str(tmp_path / "runs.db")
    assert main(['table', '--k', '2,3', '--p', '19', '--archive', db]) == 0
    capsys.readouterr()
    reports = ReportStorage(db).list_reports()
    assert len(reports) == 1
    assert reports[0]['command'] == 'table'
    assert reports[0]['document']['schema_version'] == config.SCHEMA_VERSION


def test_format_from_environment(monkeypatch, capsys):
    monkeypatch.setenv(config.FORMAT_ENV_VAR, 'structured')
    assert main(['table', '--k', '2', '--p', '19']) == 0
    assert json.loads(capsys.readouterr().out)['command'] == 'table'

    monkeypatch.setenv(config.FORMAT_ENV_VAR, 'yaml')
    assert main(['table', '--k', '2', '--p', '19']) == 2


def test_parse_rational():
    assert parse_rational('3/4') == Fraction(3, 4)
    for bad in ('0.75', '3', '3/0', None):
        with pytest.raises(ConfigError):
            parse_rational(bad)


def test_parse_int_list():
    assert parse_int_list('2..5', 'k') == [2, 3, 4, 5]
    assert parse_int_list('3,5,7', 'factors') == [3, 5, 7]
    with pytest.raises(ConfigError):
        parse_int_list('5..2', 'k')
    with pytest.raises(ConfigError):
        parse_int_list('a,b', 'k')
