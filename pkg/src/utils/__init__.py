"""
Utilities for the heavy-tail framework

This module provides input validation, size limits and series ingestion.
"""

from .file_utils import (
    validate_file_size,
    validate_file_path,
    check_input_file,
    list_series_files,
    InputLimits,
)
from .series import (
    Frequency,
    SeriesInput,
    SeriesKind,
    load_returns,
    log_returns,
    period_labels,
    read_series_csv,
)

__all__ = [
    "validate_file_size",
    "validate_file_path",
    "check_input_file",
    "list_series_files",
    "InputLimits",
    "Frequency",
    "SeriesInput",
    "SeriesKind",
    "load_returns",
    "log_returns",
    "period_labels",
    "read_series_csv",
]
