#!/usr/bin/env python3
"""
Run reports

A RunReport gathers everything one `fit` or `gof` run produced for a series.
It only holds plain JSON values: non-finite numbers are replaced by null and
their locations listed under `flagged`, so parse(emit(report)) == report.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from .. import __version__
from ..exceptions import OutputError

PathLike = Union[str, Path]


def sanitize(value: Any, path: str = "", flagged: Optional[List[str]] = None) -> Any:
    """
    Convert to plain JSON values, replacing non-finite floats by None

    Args:
        value: Nested dicts/lists/tuples/numpy values
        path: Location prefix used in flagged entries
        flagged: Collects the dotted path of every replaced value

    Returns:
        The sanitized structure
    """
    if flagged is None:
        flagged = []
    if isinstance(value, dict):
        return {
            str(k): sanitize(v, f"{path}.{k}" if path else str(k), flagged)
            for k, v in value.items()
        }
    if isinstance(value, (list, tuple, np.ndarray)):
        return [sanitize(v, f"{path}[{i}]", flagged) for i, v in enumerate(list(value))]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if not math.isfinite(number):
            flagged.append(path)
            return None
        return number
    return value


@dataclass
class RunReport:
    """
    Everything produced for one series

    Fields follow the report schema: series, config, pgml, baselines, gof,
    tail, plus the tool version and the list of flagged non-finite values.
    """

    series: str
    config: Dict[str, Any] = field(default_factory=dict)
    pgml: Optional[Dict[str, Any]] = None
    baselines: List[Dict[str, Any]] = field(default_factory=list)
    gof: List[Dict[str, Any]] = field(default_factory=list)
    tail: Optional[Dict[str, Any]] = None
    tool_version: str = __version__
    flagged: List[str] = field(default_factory=list)

    def __getitem__(self, key):
        """Allow dict-style access"""
        return getattr(self, key)

    @classmethod
    def build(cls, series: str, **sections: Any) -> "RunReport":
        """Create a report from raw sections, sanitizing every value"""
        flagged: List[str] = []
        clean = {name: sanitize(value, name, flagged) for name, value in sections.items()}
        return cls(series=series, flagged=flagged, **clean)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if data["tail"] is None:
            del data["tail"]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))

    def write(self, path: PathLike) -> None:
        write_text(self.to_json(), path)

    @classmethod
    def read(cls, path: PathLike) -> "RunReport":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def write_json(data: Dict[str, Any], path: Optional[PathLike]) -> str:
    """Sanitize and write a JSON document (or only return it when path is None)"""
    text = json.dumps(sanitize(data), indent=2, sort_keys=True, allow_nan=False) + "\n"
    if path is not None:
        write_text(text, path)
    return text


def write_csv(frame: pd.DataFrame, path: Optional[PathLike], index: bool = False) -> str:
    """Write a table as comma-separated UTF-8 (or only return it when path is None)"""
    text = frame.to_csv(index=index, lineterminator="\n")
    if path is not None:
        write_text(text, path)
    return text


def write_text(text: str, path: PathLike) -> None:
    """Write UTF-8 text, raising OutputError when the target cannot be written"""
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputError(f"Cannot write {path}: {e.strerror or e}", path=str(path)) from e
