"""
Extension Layer
The Z_p protocols lifted to the integers and to square-free Z_N
"""

from .extensions import (
    SUMDIST,
    SUMEQUAL,
    IntegerInstance,
    SquareFreeInstance,
    lift_to_prime,
    run_over_Z,
    run_over_ZN,
)

__all__ = [
    'SUMDIST',
    'SUMEQUAL',
    'IntegerInstance',
    'SquareFreeInstance',
    'lift_to_prime',
    'run_over_Z',
    'run_over_ZN',
]
