"""
Communication tables

Rows of (p, k, D, bits) for both protocols next to the trivial protocol and
the deterministic lower bound, as a pandas DataFrame.
"""

import logging
import math
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import pandas as pd

from src.errors import OutOfRangeError, TrivialRegimeError
from src.modular_layer import PrimeModulus
from src.protocol_layer import (
    DAP_MODE,
    FALLBACK_MODE,
    bit_width,
    derive_D,
    derive_D_eq,
)

logger = logging.getLogger(__name__)

COLUMNS = ['problem', 'p', 'k', 'epsilon', 'mode', 'D', 'bits_per_party',
           'total_bits', 'trivial_bits', 'lower_bound_bits', 'd_bound_ok']


def lower_bound_bits(p: int, k: int) -> int:
    """k * min{log2 k, log2 p} - k, rounded up, never negative."""
    return max(0, math.ceil(k * math.log2(min(k, p)) - k))


def _row(p: int, k: int, epsilon: Optional[Fraction]) -> dict:
    trivial = bit_width(p)
    problem = 'sumdist' if epsilon is None else 'sumequal'
    try:
        if epsilon is None:
            D = derive_D(p, k)
            # D <= 4k once p >= 11
            bound_ok = Fraction(D) <= Fraction(2 * k * p, p - 3) + 1 and (p < 11 or D <= 4 * k)
        else:
            D = derive_D_eq(p, k, epsilon)
            bound_ok = Fraction(D) <= Fraction(2 * k * p) / (epsilon * (p - 3)) + 1
        mode, width = DAP_MODE, bit_width(D)
    except TrivialRegimeError:
        D, mode, width, bound_ok = None, FALLBACK_MODE, trivial, True
    return {
        'problem': problem,
        'p': int(p),
        'k': k,
        'epsilon': None if epsilon is None else f"{epsilon.numerator}/{epsilon.denominator}",
        'mode': mode,
        'D': D,
        'bits_per_party': width,
        'total_bits': width * k,
        'trivial_bits': trivial * k,
        'lower_bound_bits': lower_bound_bits(p, k),
        'd_bound_ok': bool(bound_ok),
    }


def comm_table(primes: Iterable[int], ks: Iterable[int],
               epsilon: Optional[Fraction] = None) -> Tuple[pd.DataFrame, float]:
    """
    Communication table over a grid of (p, k).

    Args:
        primes: Prime moduli
        ks: Party counts, each at least 2
        epsilon: SUM-EQUAL error budget; SUM-DIST when None

    Returns:
        (table, fitted constant C) where C is the smallest constant with
        total_bits <= k log2 k + C k on every protocol-mode row
    """
    epsilon = None if epsilon is None else Fraction(epsilon)
    if epsilon is not None and not 0 < epsilon < 1:
        raise OutOfRangeError(f"epsilon {epsilon} is outside (0, 1)")
    rows = []
    for p in primes:
        p = PrimeModulus(p)
        for k in ks:
            if k < 2:
                raise OutOfRangeError(f"communication rows need k >= 2, got {k}")
            rows.append(_row(p, k, epsilon))
    table = pd.DataFrame(rows, columns=COLUMNS)
    table['D'] = pd.array([r['D'] for r in rows], dtype='Int64')

    dap_rows = table[table['mode'] == DAP_MODE]
    if dap_rows.empty:
        fitted = 0.0
    else:
        slack = (dap_rows['total_bits'] - dap_rows['k'] * dap_rows['k'].map(math.log2)) / dap_rows['k']
        fitted = float(slack.max())
    logger.info("comm table: %d rows, fitted C=%.3f", len(table), fitted)
    return table, fitted
