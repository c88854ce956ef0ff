"""
Configuration file
Store settings and constants
"""

import os

# Arithmetic limits
MODULUS_CAP = 1 << 62
VECTOR_MODULUS_CAP = 1 << 31  # numpy int64 batch paths: products stay below 2^62
DENSE_SET_MAX_P = 1 << 16

# Harness
ENUMERATION_LIMIT = 10 ** 7  # full enumeration when p^k <= limit
DEFAULT_SAMPLES = 10 ** 5
DEFAULT_SEED = 0

# Output
SCHEMA_VERSION = 1
FORMAT_ENV_VAR = "SUMPROTO_FORMAT"
OUTPUT_FORMATS = ("table", "structured")
DEFAULT_OUTPUT_FORMAT = os.environ.get(FORMAT_ENV_VAR, "table")

# Storage
ARCHIVE_PATH = "sumproto_reports.db"
