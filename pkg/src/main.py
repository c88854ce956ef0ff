"""
sumproto - command line front end

Run with: python3 -m src.main <command> [options]

Commands:
  sumdist     one SUM-DIST run over Z_p
  sumequal    one SUM-EQUAL run over Z_p (optionally with its exact error)
  over-z      either problem over the integers with n-bit inputs
  over-zn     either problem over Z_N for square-free N
  verify      exhaustive SUM-DIST correctness and sumset checks
  error       SUM-EQUAL error measurement
  lowerbound  counterexamples against protocols with too few bits
  table       communication table over a grid of (p, k)

Exit codes: 0 success, 1 a checked property failed, 2 usage or configuration error.
"""

import argparse
import logging
import os
import re
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

import config
from src.errors import ConfigError, OnPromiseError, PromiseViolationError, SumProtocolError
from src.extension_layer import (
    SUMDIST,
    SUMEQUAL,
    IntegerInstance,
    SquareFreeInstance,
    run_over_Z,
    run_over_ZN,
)
from src.harness_layer import (
    attack_random_protocols,
    build_document,
    check_lemmas,
    check_separating_scalars,
    comm_table,
    exhaustive_verify_sumdist,
    find_counterexample,
    integer_oracle,
    measure_error_sumequal,
    modular_oracle,
    render_table,
    sumdist_partition_protocol,
    to_records,
)
from src.ingestion_layer import ingest_inputs
from src.modular_layer import is_prime
from src.protocol_layer import (
    FALLBACK_MODE,
    PublicRandomness,
    SumDistInstance,
    SumEqualInstance,
    bit_width,
    exact_error,
    on_promise,
    run_sumdist,
    run_sumequal,
)
from src.storage_layer import ReportStorage

logger = logging.getLogger(__name__)

# (records, summary, ok)
Outcome = Tuple[List[Dict[str, Any]], Dict[str, Any], bool]

_RATIONAL = re.compile(r'^\s*(\d+)\s*/\s*(\d+)\s*$')
_RANGE = re.compile(r'^\s*(\d+)\s*\.\.\s*(\d+)\s*$')


def parse_rational(text: Optional[str], name: str = 'eps') -> Fraction:
    """
    Parse "a/b" into a Fraction. Decimals are rejected.
    """
    if text is None:
        raise ConfigError(f"--{name} is required")
    match = _RATIONAL.match(text)
    if not match:
        raise ConfigError(f"--{name} must be a rational 'a/b', got {text!r}")
    numerator, denominator = int(match.group(1)), int(match.group(2))
    if denominator == 0:
        raise ConfigError(f"--{name} has a zero denominator")
    return Fraction(numerator, denominator)


def parse_int_list(text: str, name: str) -> List[int]:
    """
    "2..16" or "3,5,7" into a list of ints.
    """
    match = _RANGE.match(text)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        if lo > hi:
            raise ConfigError(f"--{name} range {text!r} is empty")
        return list(range(lo, hi + 1))
    try:
        values = [int(t) for t in text.split(',') if t.strip()]
    except ValueError as e:
        raise ConfigError(f"--{name} must be 'a..b' or a comma list, got {text!r}") from e
    if not values:
        raise ConfigError(f"--{name} is empty")
    return values


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required")


def _targets(args: argparse.Namespace) -> Tuple[Tuple[int, ...], Optional[Fraction]]:
    if args.problem == SUMDIST:
        _require(args, 'g0', 'g1')
        return (args.g0, args.g1), None
    _require(args, 'g')
    return (args.g,), parse_rational(args.eps)


def _oracle_bit(oracle, *call) -> Optional[int]:
    """Expected bit, or None with a warning when SUM-DIST inputs break the promise."""
    try:
        return oracle(*call)
    except PromiseViolationError as e:
        logger.warning("%s: off-promise, the decision carries no guarantee", e)
        return None


def cmd_sumdist(args: argparse.Namespace) -> Outcome:
    instance = SumDistInstance(args.p, args.k, args.g0, args.g1)
    inputs = ingest_inputs(args.inputs)
    promise = on_promise(instance, [x % instance.p for x in inputs])
    if not promise:
        logger.warning("inputs sum to %d, neither g0=%d nor g1=%d: off-promise, "
                       "the decision carries no guarantee",
                       sum(inputs) % instance.p, instance.g0, instance.g1)
    if instance.mode == FALLBACK_MODE:
        logger.warning("p=%d, k=%d is outside the D-AP regime; running the trivial protocol",
                       instance.p, instance.k)
    decision, transcript = run_sumdist(instance, inputs)
    record = {**transcript.summary(), 'decision': decision,
              'promise': 'on-promise' if promise else 'off-promise'}
    summary = {
        'decision': decision,
        'total_bits': transcript.total_bits,
        'trivial_bits': bit_width(instance.p) * instance.k,
    }
    return [record], summary, True


def cmd_sumequal(args: argparse.Namespace) -> Outcome:
    instance = SumEqualInstance(args.p, args.k, args.g, parse_rational(args.eps))
    inputs = ingest_inputs(args.inputs)
    if instance.mode == FALLBACK_MODE:
        logger.warning("epsilon=%s is not above 2k/(p-3) = %s (or D would reach p); "
                       "running the trivial protocol",
                       instance.epsilon, Fraction(2 * instance.k, max(instance.p - 3, 1)))
    decision, transcript = run_sumequal(instance, inputs, PublicRandomness(args.seed))
    record = {**transcript.summary(), 'decision': decision}
    summary: Dict[str, Any] = {
        'decision': decision,
        'total_bits': transcript.total_bits,
        'trivial_bits': bit_width(instance.p) * instance.k,
    }
    ok = True
    if args.exact_error:
        try:
            error = exact_error(instance, inputs).error
        except OnPromiseError:
            error = Fraction(0)
        summary['exact_error'] = error
        summary['error_within_epsilon'] = error <= instance.epsilon
        ok = error <= instance.epsilon
    return [record], summary, ok


def cmd_over_z(args: argparse.Namespace) -> Outcome:
    targets, epsilon = _targets(args)
    instance = IntegerInstance(args.n, args.k, args.problem, targets, epsilon)
    inputs = ingest_inputs(args.inputs)
    decision, transcript = run_over_Z(instance, inputs, args.seed)
    record = {**transcript.summary(), 'decision': decision}
    summary = {
        'decision': decision,
        'oracle': _oracle_bit(integer_oracle, targets, inputs),
        'total_bits': transcript.total_bits,
    }
    return [record], summary, True


def cmd_over_zn(args: argparse.Namespace) -> Outcome:
    targets, epsilon = _targets(args)
    factors = parse_int_list(args.factors, 'factors')
    instance = SquareFreeInstance(tuple(factors), args.k, args.problem, targets, epsilon)
    inputs = ingest_inputs(args.inputs)
    decision, composite = run_over_ZN(instance, inputs, args.seed)
    records = [t.summary() for t in composite.factors]
    summary = {
        'N': instance.N,
        'decision': decision,
        'oracle': _oracle_bit(modular_oracle, targets, inputs, instance.N),
        'total_bits': composite.total_bits,
    }
    return records, summary, True


def cmd_verify(args: argparse.Namespace) -> Outcome:
    primes = [p for p in range(7, args.p_max + 1) if is_prime(p)]
    if not primes or args.k_max < 2:
        raise ConfigError("verify needs --p-max >= 7 and --k-max >= 2")
    records = []
    for p in primes:
        separating = check_separating_scalars(p, Fraction(1, 2))
        for k in range(2, args.k_max + 1):
            report = exhaustive_verify_sumdist(p, k, args.limit, args.samples,
                                               args.max_pairs, args.seed)
            lemmas = check_lemmas(p, k, args.limit)
            records.append({**report.as_record(), **lemmas, 'separating': separating})
    violations = sum(r['errors'] + r['scaling'] + r['sumset_size'] + r['bits'] + r['separating']
                     for r in records)
    summary = {
        'configurations': len(records),
        'runs': sum(r['runs'] for r in records),
        'violations': violations,
    }
    return records, summary, violations == 0


def cmd_error(args: argparse.Namespace) -> Outcome:
    report = measure_error_sumequal(args.p, args.k, parse_rational(args.eps),
                                    args.trials, args.seed)
    summary = {'max_error': report.max_error, 'epsilon': report.epsilon, 'ok': report.ok}
    return [report.as_record()], summary, report.ok


def cmd_lowerbound(args: argparse.Namespace) -> Outcome:
    report = attack_random_protocols(args.p, args.k, args.t, args.random_protocols,
                                     args.seed, args.g0, args.g1)
    record = {
        'p': report.p,
        'k': report.k,
        't': report.t,
        'in_regime': report.in_regime,
        'protocols': report.protocols,
        'found': report.found,
        'verified': report.verified,
    }
    ok = report.ok
    summary: Dict[str, Any] = {'counterexamples': f"{report.found}/{report.protocols}"}
    if args.against_sumdist:
        # a correct protocol admits no counterexample
        proto = sumdist_partition_protocol(SumDistInstance(args.p, args.k, args.g0, args.g1))
        found = find_counterexample(proto, args.g0, args.g1) is not None
        summary['sumdist_bits_per_party'] = proto.t
        summary['sumdist_counterexample'] = found
        ok = ok and not found
    summary['ok'] = ok
    return [record], summary, ok


def cmd_table(args: argparse.Namespace) -> Outcome:
    ks = parse_int_list(args.k, 'k')
    primes = parse_int_list(args.p, 'p')
    epsilon = parse_rational(args.eps) if args.eps is not None else None
    table, fitted = comm_table(primes, ks, epsilon)
    bits_by_k = table[table['mode'] != FALLBACK_MODE].groupby('k')['bits_per_party'].nunique()
    summary = {
        'fitted_C': round(fitted, 6),
        'bits_constant_in_p': bool((bits_by_k <= 1).all()),
        'd_bound_ok': bool(np.all(table['d_bound_ok'])),
    }
    return to_records(table), summary, summary['d_bound_ok']


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--format', choices=config.OUTPUT_FORMATS, default=None,
                        help=f"output format (default: ${config.FORMAT_ENV_VAR} or table)")
    parser.add_argument('--archive', metavar='PATH', default=None,
                        help="also store the structured document in this SQLite file")
    parser.add_argument('-v', '--verbose', action='store_true', help="debug logging on stderr")


def _add_problem(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--problem', choices=(SUMDIST, SUMEQUAL), default=SUMDIST)
    parser.add_argument('--g0', type=int)
    parser.add_argument('--g1', type=int)
    parser.add_argument('--g', type=int)
    parser.add_argument('--eps')
    parser.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    parser.add_argument('--inputs', required=True, help="inline list '4,6' or a .txt/.csv file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='sumproto', description=__doc__.split('\n')[1])
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('sumdist', help="one SUM-DIST run over Z_p")
    p.add_argument('--p', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--g0', type=int, required=True)
    p.add_argument('--g1', type=int, required=True)
    p.add_argument('--inputs', required=True)
    p.set_defaults(func=cmd_sumdist)

    p = sub.add_parser('sumequal', help="one SUM-EQUAL run over Z_p")
    p.add_argument('--p', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--g', type=int, required=True)
    p.add_argument('--eps', required=True, help="error budget as 'a/b'")
    p.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    p.add_argument('--inputs', required=True)
    p.add_argument('--exact-error', action='store_true',
                   help="also enumerate every c and report the exact error")
    p.set_defaults(func=cmd_sumequal)

    p = sub.add_parser('over-z', help="run over the integers with n-bit inputs")
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    _add_problem(p)
    p.set_defaults(func=cmd_over_z)

    p = sub.add_parser('over-zn', help="run over Z_N, N given by its prime factors")
    p.add_argument('--factors', required=True, help="distinct odd primes, e.g. 3,5,7")
    p.add_argument('--k', type=int, required=True)
    _add_problem(p)
    p.set_defaults(func=cmd_over_zn)

    p = sub.add_parser('verify', help="exhaustive SUM-DIST and sumset checks")
    p.add_argument('--p-max', type=int, default=31)
    p.add_argument('--k-max', type=int, default=3)
    p.add_argument('--limit', type=int, default=config.ENUMERATION_LIMIT)
    p.add_argument('--samples', type=int, default=config.DEFAULT_SAMPLES)
    p.add_argument('--max-pairs', type=int, default=None)
    p.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('error', help="SUM-EQUAL exact error measurement")
    p.add_argument('--p', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--eps', required=True)
    p.add_argument('--trials', type=int, default=1000)
    p.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    p.set_defaults(func=cmd_error)

    p = sub.add_parser('lowerbound', help="counterexamples against t-bit protocols")
    p.add_argument('--p', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--t', type=int, required=True)
    p.add_argument('--random-protocols', type=int, default=100)
    p.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    p.add_argument('--g0', type=int, default=0)
    p.add_argument('--g1', type=int, default=1)
    p.add_argument('--against-sumdist', action='store_true',
                   help="also attack the SUM-DIST protocol itself")
    p.set_defaults(func=cmd_lowerbound)

    p = sub.add_parser('table', help="communication table")
    p.add_argument('--k', default='2..16', help="'a..b' or comma list")
    p.add_argument('--p', default='1009,1000003,2305843009213693951')
    p.add_argument('--eps', default=None, help="SUM-EQUAL budget 'a/b'; SUM-DIST when absent")
    p.set_defaults(func=cmd_table)

    for name in sub.choices.values():
        _add_common(name)
    return parser


def _run_config(args: argparse.Namespace) -> Dict[str, Any]:
    skip = {'command', 'func', 'format', 'archive', 'verbose'}
    return {key: value for key, value in sorted(vars(args).items()) if key not in skip}


def _output_format(args: argparse.Namespace) -> str:
    fmt = args.format or os.environ.get(config.FORMAT_ENV_VAR, config.DEFAULT_OUTPUT_FORMAT)
    if fmt not in config.OUTPUT_FORMATS:
        raise ConfigError(f"${config.FORMAT_ENV_VAR}={fmt!r} is not one of {config.OUTPUT_FORMATS}")
    return fmt


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
        force=True,
    )

    try:
        fmt = _output_format(args)
        records, summary, ok = args.func(args)
        run_config = _run_config(args)
        document = build_document(args.command, run_config, records, summary)
        if fmt == 'structured':
            sys.stdout.write(document)
        else:
            sys.stdout.write(render_table(records, summary, title=args.command))
        if args.archive:
            ReportStorage(args.archive).store_report(args.command, run_config, document, ok)
    except SumProtocolError as e:
        print(f"sumproto {args.command}: {e}", file=sys.stderr)
        return 2

    if not ok:
        logger.error("%s: a checked property failed", args.command)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
