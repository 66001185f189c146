"""Ingestion of observed case-count time series from CSV.

Input is a UTF-8 CSV with a header row, ISO-8601 dates and either a daily
or a cumulative count column (the other form is derived).  Dates are
normalised to a gap-free one-day grid; days missing from the file are
filled with zero daily cases rather than interpolated, since surveillance
feeds commonly omit zero-report days.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

__all__ = [
    "CaseDataError",
    "ColumnSchema",
    "CaseSeries",
    "parse_case_csv",
    "window",
    "cumulative_from_daily",
    "daily_from_cumulative",
    "series_to_csv",
]


class CaseDataError(ValueError):
    """Malformed or inconsistent case data; the message names the offending row."""


@dataclass(frozen=True)
class ColumnSchema:
    """Maps CSV columns to roles: the date column plus exactly one count column."""

    date_column: str = "date"
    daily_column: str | None = "daily"
    cumulative_column: str | None = None

    def __post_init__(self):
        if (self.daily_column is None) == (self.cumulative_column is None):
            raise ValueError(
                "schema must name exactly one of daily_column or cumulative_column"
            )


@dataclass(frozen=True, eq=False)
class CaseSeries:
    """Dated observed case counts on a gap-free one-day grid.

    Counts are integers in persons; cumulative[i] = cumulative[i-1] + daily[i]
    for i >= 1.  Day indices are 1-based from epoch_date (the first date), so
    a series loaded for the full 2022 US study window maps index 1 to
    2022-05-10 and index 236 to 2022-12-31.
    """

    dates: tuple[date, ...]
    daily: np.ndarray
    cumulative: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, CaseSeries):
            return NotImplemented
        return (
            self.dates == other.dates
            and np.array_equal(self.daily, other.daily)
            and np.array_equal(self.cumulative, other.cumulative)
        )

    @property
    def epoch_date(self) -> date:
        return self.dates[0]

    def __len__(self) -> int:
        return len(self.dates)

    def day_indices(self) -> np.ndarray:
        return np.arange(1, len(self.dates) + 1)

    def day_offsets(self) -> np.ndarray:
        """Days since the first observation (the model's time grid)."""
        return np.arange(len(self.dates), dtype=float)


def cumulative_from_daily(daily) -> np.ndarray:
    return np.cumsum(np.asarray(daily))


def daily_from_cumulative(cumulative) -> np.ndarray:
    cum = np.asarray(cumulative)
    return np.diff(cum, prepend=cum.dtype.type(0))


def _parse_count(text: str, row: int) -> int:
    try:
        value = float(text)
    except ValueError:
        raise CaseDataError(f"row {row}: count {text!r} is not a number") from None
    if not np.isfinite(value):
        raise CaseDataError(f"row {row}: count {text!r} is not finite")
    if value < 0:
        raise CaseDataError(f"row {row}: negative count {text!r}")
    if abs(value - round(value)) > 1e-9:
        raise CaseDataError(f"row {row}: count {text!r} is not a whole number of persons")
    return int(round(value))


def parse_case_csv(content: bytes | str, schema: ColumnSchema = ColumnSchema()) -> CaseSeries:
    """Parse a case-count CSV into a normalised CaseSeries.

    Rows are sorted by date; gaps inside the date range become zero-daily
    days; malformed dates, negative counts, duplicate dates and an empty
    body raise CaseDataError naming the row (row 1 is the header).
    """
    if isinstance(content, bytes):
        try:
            content = content.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CaseDataError(f"input is not valid UTF-8: {exc}") from None

    rows = list(csv.reader(content.splitlines()))
    if not rows:
        raise CaseDataError("empty input: no header row")
    header = [name.strip() for name in rows[0]]

    count_column = schema.daily_column or schema.cumulative_column
    try:
        date_idx = header.index(schema.date_column)
        count_idx = header.index(count_column)
    except ValueError:
        raise CaseDataError(
            f"header {header!r} is missing column {schema.date_column!r} or {count_column!r}"
        ) from None

    observed: dict[date, int] = {}
    for i, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(date_idx, count_idx):
            raise CaseDataError(f"row {i}: expected {len(header)} columns, got {len(row)}")
        try:
            day = date.fromisoformat(row[date_idx].strip())
        except ValueError:
            raise CaseDataError(
                f"row {i}: malformed date {row[date_idx]!r} (expected YYYY-MM-DD)"
            ) from None
        if day in observed:
            raise CaseDataError(f"row {i}: duplicate date {day.isoformat()}")
        observed[day] = _parse_count(row[count_idx].strip(), i)

    if not observed:
        raise CaseDataError("empty body: no data rows")

    days = sorted(observed)
    span = (days[-1] - days[0]).days + 1
    grid = [days[0] + timedelta(days=k) for k in range(span)]

    if schema.daily_column is not None:
        daily = np.array([observed.get(d, 0) for d in grid], dtype=np.int64)
        cumulative = cumulative_from_daily(daily)
    else:
        filled, last = [], 0
        for d in grid:
            last = observed.get(d, last)
            filled.append(last)
        cumulative = np.array(filled, dtype=np.int64)
        daily = daily_from_cumulative(cumulative)
        drops = np.nonzero(daily < 0)[0]
        if drops.size:
            d = grid[int(drops[0])]
            raise CaseDataError(
                f"cumulative counts decrease at {d.isoformat()} "
                f"(implied negative daily count {int(daily[drops[0]])})"
            )

    return CaseSeries(dates=tuple(grid), daily=daily, cumulative=cumulative)


def window(series: CaseSeries, start_date: date, end_date: date) -> CaseSeries:
    """Sub-series between two dates inclusive.

    Cumulative values stay absolute (the first value of the window equals
    the original cumulative at start_date), so windowing never resets the
    running total to zero.
    """
    if start_date > end_date:
        raise CaseDataError(
            f"start {start_date.isoformat()} is after end {end_date.isoformat()}"
        )
    first, last = series.dates[0], series.dates[-1]
    if start_date < first or end_date > last:
        raise CaseDataError(
            f"requested window {start_date.isoformat()}..{end_date.isoformat()} is outside "
            f"the series span {first.isoformat()}..{last.isoformat()}"
        )
    i = (start_date - first).days
    j = (end_date - first).days + 1
    return CaseSeries(
        dates=series.dates[i:j],
        daily=series.daily[i:j].copy(),
        cumulative=series.cumulative[i:j].copy(),
    )


def series_to_csv(series: CaseSeries) -> str:
    """Serialise with both count forms: date,daily,cumulative."""
    lines = ["date,daily,cumulative"]
    for d, inc, cum in zip(series.dates, series.daily, series.cumulative):
        lines.append(f"{d.isoformat()},{int(inc)},{int(cum)}")
    return "\n".join(lines) + "\n"
