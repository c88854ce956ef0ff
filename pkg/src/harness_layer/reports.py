"""
Reports

Purpose: Present harness results as a human table or as one structured,
self-describing document per invocation.

Design Ideas:
- Every report is a list of flat records plus a summary dict
- Table output: pandas to_string, one line per record
- Structured output: JSON with sorted keys and a schema version, no timestamps,
  so the same config and seed always give byte-identical output
- Fractions travel as "a/b" strings, never as floats
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

import config


def jsonable(value: Any) -> Any:
    """Convert Fractions, numpy scalars and pandas NA into plain JSON values."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if np.isnan(value) else float(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if value is None or value is pd.NA:
        return None
    return value


def to_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    return [jsonable(r) for r in frame.astype(object).to_dict(orient='records')]


def to_frame(records: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame([jsonable(r) for r in records])


def render_table(records: List[Dict[str, Any]], summary: Optional[Dict[str, Any]] = None,
                 title: Optional[str] = None) -> str:
    """
    Line-oriented table: optional title, one row per record, then summary lines.
    """
    lines = []
    if title:
        lines.append(title)
    if records:
        lines.append(to_frame(records).to_string(index=False, na_rep='-'))
    for key, value in (summary or {}).items():
        lines.append(f"{key}: {jsonable(value)}")
    return '\n'.join(lines) + '\n'


def build_document(command: str, run_config: Dict[str, Any], records: List[Dict[str, Any]],
                   summary: Dict[str, Any]) -> str:
    """
    One structured document for an invocation.
    """
    document = {
        'schema_version': config.SCHEMA_VERSION,
        'command': command,
        'config': jsonable(run_config),
        'records': [jsonable(r) for r in records],
        'summary': jsonable(summary),
    }
    return json.dumps(document, sort_keys=True, indent=2) + '\n'
