"""
Ingestion Layer

Purpose: Turn whatever the user hands over (an inline list or a file) into one
integer input per party.

Design Ideas:
- Keep it very simple: inline "4,6", a .txt file of comma or whitespace separated values, or a .csv file
- CSV goes through pandas; the first column holds the inputs, one row per party
- Validation stops at "these are integers"; range checks belong to the protocol that runs them
"""

import logging
import re
from pathlib import Path
from typing import List, Optional

import pandas as pd

from src.errors import ConfigError

logger = logging.getLogger(__name__)

_SEPARATORS = re.compile(r'[\s,]+')


def parse_inline(text: str) -> List[int]:
    """
    Parse "4,6" or "4 6" into integers.
    """
    tokens = [t for t in _SEPARATORS.split(text.strip()) if t]
    try:
        return [int(t) for t in tokens]
    except ValueError as e:
        raise ConfigError(f"inputs must be integers: {text!r}") from e


def ingest_inputs(source: str, file_type: Optional[str] = None) -> List[int]:
    """
    Read party inputs from an inline list or a file.

    Args:
        source: Inline list, or path to a .txt / .csv file
        file_type: Optional type hint ('txt', 'csv'); inferred from the suffix when None

    Returns:
        One integer per party, in order
    """
    path = Path(source)
    if not path.is_file():
        values = parse_inline(source)
    else:
        if file_type is None:
            file_type = path.suffix.lower().lstrip('.')
        if file_type == 'csv':
            frame = pd.read_csv(path, header=None, comment='#', skipinitialspace=True)
            column = pd.to_numeric(frame.iloc[:, 0], errors='coerce')
            if column.isna().any() or (column % 1 != 0).any():
                raise ConfigError(f"{path.name}: first column must hold integers")
            values = [int(v) for v in column]
        elif file_type in ('txt', ''):
            values = parse_inline(path.read_text(encoding='utf-8'))
        else:
            raise ConfigError(f"unsupported input file type: {file_type}")
        logger.debug("read %d inputs from %s", len(values), path)

    if not validate_inputs(values):
        raise ConfigError("no inputs given")
    return values


def validate_inputs(values: List[int]) -> bool:
    """
    Basic validation: at least one value.
    """
    return len(values) > 0
