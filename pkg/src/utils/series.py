#!/usr/bin/env python3
"""
Series ingestion

Reads one price or return series from CSV and turns prices into log-returns
at daily, weekly or monthly sampling. Two layouts are accepted, both with a
header row, comma delimiter and UTF-8 text:

    return              one log-return per row
    date,price          ISO-8601 dates in increasing order, positive prices

Row numbers in errors count the header as row 1, so they match what an editor
shows for the file.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..exceptions import DomainError, IngestionError
from .file_utils import check_input_file

logger = logging.getLogger(__name__)

HEADER_ROWS = 1
RETURN_COLUMN = "return"
DATE_COLUMN = "date"
PRICE_COLUMN = "price"


class SeriesKind(Enum):
    PRICES = "prices"
    RETURNS = "returns"


class Frequency(Enum):
    """Return sampling; weekly and monthly keep the last price of each period"""

    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"

    @classmethod
    def parse(cls, value: Union[str, "Frequency"]) -> "Frequency":
        if isinstance(value, Frequency):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise DomainError(f"Unknown frequency '{value}' (expected {names})", frequency=value)

    @property
    def period_code(self) -> Optional[str]:
        return {"daily": None, "weekly": "W", "monthly": "M"}[self.value]


def _file_row(index: int) -> int:
    return int(index) + HEADER_ROWS + 1


@dataclass
class SeriesInput:
    """
    One input series

    Prices must be strictly positive and at least two long. Dates are only
    present for `date,price` files and are required for weekly or monthly
    returns.
    """

    id: str
    values: np.ndarray
    kind: SeriesKind = SeriesKind.RETURNS
    frequency: Frequency = Frequency.DAILY
    dates: Optional[pd.DatetimeIndex] = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.kind is SeriesKind.PRICES:
            check_prices(self.values)

    def __getitem__(self, key):
        """Allow dict-style access"""
        return getattr(self, key)

    def __len__(self) -> int:
        return int(self.values.size)

    def returns(self, frequency: Union[str, Frequency, None] = None) -> np.ndarray:
        """
        Log-returns of this series

        Args:
            frequency: Sampling to use; defaults to the series' own frequency

        Returns:
            Array of log-returns (the values themselves for a return series)
        """
        freq = Frequency.parse(frequency) if frequency is not None else self.frequency
        if self.kind is SeriesKind.RETURNS:
            if freq is not Frequency.DAILY:
                raise IngestionError(
                    "A return series cannot be resampled; provide date,price input",
                    series=self.id,
                    frequency=freq.value,
                )
            return self.values.copy()
        periods = period_labels(self.dates, freq) if freq is not Frequency.DAILY else None
        return log_returns(self.values, freq, periods)


def check_prices(prices: Any) -> np.ndarray:
    """Return prices as an array, raising IngestionError at the first nonpositive one"""
    values = np.asarray(prices, dtype=float)
    bad = np.flatnonzero(~(values > 0.0))
    if bad.size:
        index = int(bad[0])
        raise IngestionError(
            f"Price must be positive, got {values[index]} at row {_file_row(index)}",
            row=_file_row(index),
            value=float(values[index]),
        )
    if values.size < 2:
        raise IngestionError("At least two prices are needed for a return", n=int(values.size))
    return values


def period_labels(dates: Optional[Sequence[Any]], frequency: Union[str, Frequency]) -> np.ndarray:
    """
    Calendar period of every date (ISO week or month)

    Args:
        dates: Dates of the observations
        frequency: Weekly or monthly

    Returns:
        Array of period labels, one per date
    """
    freq = Frequency.parse(frequency)
    if dates is None:
        raise IngestionError(
            f"{freq.value} returns need a date column", frequency=freq.value
        )
    if freq.period_code is None:
        return np.arange(len(dates))
    index = pd.DatetimeIndex(dates)
    return index.to_period(freq.period_code).astype(str).to_numpy()


def log_returns(
    prices: Any,
    frequency: Union[str, Frequency] = Frequency.DAILY,
    periods: Optional[Sequence[Any]] = None,
) -> np.ndarray:
    """
    Log-returns r_i = ln(p_{i+1} / p_i)

    For weekly and monthly sampling the last observation of each period is
    kept before differencing. Periods are taken as consecutive runs of equal
    labels, so the prices must already be in time order.

    Args:
        prices: Strictly positive prices in time order
        frequency: daily, weekly or monthly
        periods: Period label per price (required unless daily)

    Returns:
        Array of log-returns
    """
    freq = Frequency.parse(frequency)
    values = check_prices(prices)

    if freq is not Frequency.DAILY:
        if periods is None:
            raise IngestionError(
                f"{freq.value} returns need a period-grouping column", frequency=freq.value
            )
        labels = np.asarray(periods)
        if labels.shape[0] != values.shape[0]:
            raise IngestionError(
                "Period labels and prices differ in length",
                prices=int(values.size),
                periods=int(labels.shape[0]),
            )
        last = np.append(labels[1:] != labels[:-1], True)
        values = values[last]
        if values.size < 2:
            raise IngestionError(
                f"Fewer than two {freq.value} periods in the series", periods=int(values.size)
            )

    return np.diff(np.log(values))


def _parse_error_row(error: Exception) -> Optional[int]:
    match = re.search(r"line (\d+)", str(error))
    return int(match.group(1)) if match else None


def _first_bad(mask: pd.Series) -> Optional[int]:
    positions = np.flatnonzero(mask.to_numpy())
    return int(positions[0]) if positions.size else None


def read_series_csv(path: Union[str, Path], series_id: Optional[str] = None) -> SeriesInput:
    """
    Read a `return` or `date,price` CSV file

    Args:
        path: File to read
        series_id: Label for the series (defaults to the file stem)

    Returns:
        SeriesInput with kind Returns or Prices
    """
    file_path = check_input_file(str(path))
    label = series_id or file_path.stem

    try:
        frame = pd.read_csv(
            file_path, dtype=str, encoding="utf-8", keep_default_na=False, skipinitialspace=True
        )
    except pd.errors.EmptyDataError:
        raise IngestionError(f"Empty file: {file_path}", file_path=str(file_path), row=1)
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise IngestionError(
            f"Malformed CSV {file_path}: {e}", file_path=str(file_path), row=_parse_error_row(e)
        )

    frame.columns = [str(c).strip().lower() for c in frame.columns]
    if frame.empty:
        raise IngestionError(f"No data rows in {file_path}", file_path=str(file_path), row=2)

    if RETURN_COLUMN in frame.columns:
        values = pd.to_numeric(frame[RETURN_COLUMN].str.strip(), errors="coerce")
        bad = _first_bad(values.isna() | ~np.isfinite(values.fillna(0.0)))
        if bad is not None:
            raise IngestionError(
                f"Malformed return '{frame[RETURN_COLUMN].iloc[bad]}' at row {_file_row(bad)}",
                file_path=str(file_path),
                row=_file_row(bad),
            )
        logger.debug(f"Read {len(values)} returns from {file_path}")
        return SeriesInput(label, values.to_numpy(dtype=float), SeriesKind.RETURNS)

    if DATE_COLUMN in frame.columns and PRICE_COLUMN in frame.columns:
        dates = pd.to_datetime(frame[DATE_COLUMN].str.strip(), format="ISO8601", errors="coerce")
        prices = pd.to_numeric(frame[PRICE_COLUMN].str.strip(), errors="coerce")
        bad = _first_bad(dates.isna() | prices.isna())
        if bad is not None:
            raise IngestionError(
                f"Malformed row {_file_row(bad)}: "
                f"date='{frame[DATE_COLUMN].iloc[bad]}' price='{frame[PRICE_COLUMN].iloc[bad]}'",
                file_path=str(file_path),
                row=_file_row(bad),
            )
        unordered = _first_bad(dates.diff().dt.total_seconds().fillna(1.0) <= 0)
        if unordered is not None:
            raise IngestionError(
                f"Dates must be strictly increasing (row {_file_row(unordered)})",
                file_path=str(file_path),
                row=_file_row(unordered),
            )
        logger.debug(f"Read {len(prices)} prices from {file_path}")
        return SeriesInput(
            label,
            prices.to_numpy(dtype=float),
            SeriesKind.PRICES,
            dates=pd.DatetimeIndex(dates),
        )

    raise IngestionError(
        f"Expected a '{RETURN_COLUMN}' column or '{DATE_COLUMN},{PRICE_COLUMN}' columns, "
        f"found {list(frame.columns)}",
        file_path=str(file_path),
        row=1,
    )


def load_returns(
    path: Union[str, Path], frequency: Union[str, Frequency] = Frequency.DAILY
) -> SeriesInput:
    """Read a series file and return it as a return series at the given sampling"""
    series = read_series_csv(path)
    freq = Frequency.parse(frequency)
    returns = series.returns(freq)
    return SeriesInput(series.id, returns, SeriesKind.RETURNS, freq)
