"""
Ingestion Layer
Reads party inputs from inline lists and files
"""

from .ingestion import ingest_inputs, parse_inline, validate_inputs

__all__ = ['ingest_inputs', 'parse_inline', 'validate_inputs']
