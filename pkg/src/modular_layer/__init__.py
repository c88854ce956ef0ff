"""
Modular Layer
Residues, primality, inverses, and CRT recombination
"""

from .modular import (
    CrtSystem,
    PrimeModulus,
    Residue,
    crt_combine,
    is_prime,
    mod_inverse,
    next_prime_above,
    xgcd,
)

__all__ = [
    'CrtSystem',
    'PrimeModulus',
    'Residue',
    'crt_combine',
    'is_prime',
    'mod_inverse',
    'next_prime_above',
    'xgcd',
]
