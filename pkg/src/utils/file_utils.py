#!/usr/bin/env python3
"""
File utility functions for the heavy-tail framework

Provides helper functions for validating series files and spec files before
they are parsed, plus the recommended input limits.
"""

import os
from pathlib import Path
from typing import List, Optional, Tuple

from ..exceptions import IngestionError


class InputLimits:
    """Recommended limits for series input"""

    # A 99-level quantile grid needs at least this many observations
    MIN_OBSERVATIONS = 100

    # File size limits in megabytes
    SERIES_FILE = 100.0
    SPEC_FILE = 1.0


def validate_file_size(
    file_path: str, max_size_mb: Optional[float] = None
) -> Tuple[bool, float, Optional[str]]:
    """
    Validate file size against a maximum limit

    Args:
        file_path: Path to the file to check
        max_size_mb: Maximum allowed size in megabytes. If None, no limit is enforced.

    Returns:
        Tuple of (is_valid, file_size_mb, error_message)
    """
    try:
        file_size_mb = Path(file_path).stat().st_size / (1024 * 1024)
    except OSError as e:
        return False, 0.0, f"Failed to check file size: {e}"

    if max_size_mb is not None and file_size_mb > max_size_mb:
        return (
            False,
            file_size_mb,
            f"File too large: {file_size_mb:.2f}MB exceeds limit of {max_size_mb}MB",
        )
    return True, file_size_mb, None


def validate_file_path(file_path: str) -> Tuple[bool, Optional[str]]:
    """
    Validate that a file path exists and is readable

    Returns:
        Tuple of (is_valid, error_message)
    """
    path = Path(file_path)
    if not path.exists():
        return False, f"File does not exist: {file_path}"
    if not path.is_file():
        return False, f"Path is not a file: {file_path}"
    if not os.access(file_path, os.R_OK):
        return False, f"File is not readable: {file_path}"
    return True, None


def check_input_file(
    file_path: str, max_size_mb: Optional[float] = InputLimits.SERIES_FILE
) -> Path:
    """
    Validate path and size, raising IngestionError on failure

    Args:
        file_path: File to check
        max_size_mb: Size limit in megabytes (None for no limit)

    Returns:
        The path as a Path object
    """
    path_valid, path_error = validate_file_path(file_path)
    if not path_valid:
        raise IngestionError(path_error or "Invalid path", file_path=str(file_path))

    size_valid, size_mb, size_error = validate_file_size(file_path, max_size_mb)
    if not size_valid:
        raise IngestionError(
            size_error or "File too large", file_path=str(file_path), file_size_mb=size_mb
        )
    return Path(file_path)


def list_series_files(directory: str) -> List[Path]:
    """CSV files directly inside a directory, sorted by name"""
    path = Path(directory)
    if not path.is_dir():
        raise IngestionError(f"Not a directory: {directory}", file_path=str(directory))
    files = sorted(p for p in path.iterdir() if p.is_file() and p.suffix.lower() == ".csv")
    if not files:
        raise IngestionError(f"No CSV files in {directory}", file_path=str(directory))
    return files
