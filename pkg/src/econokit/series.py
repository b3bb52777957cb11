"""Dated series: CSV ingestion, calendar alignment, growth rates, differencing.

Everything lives on a calendar-day grid.  Market series have no value on
weekends and exchange holidays; :func:`align_calendar` forward-fills those
days, which makes the growth rate zero on closed days.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from econokit.errors import CoverageError, DataError, DomainError, ParseError

ONE_DAY = timedelta(days=1)

VARIABLES = ("growthc", "gsensex", "gex")
DISPLAY_NAMES = {"growthc": "GROWTHC", "gsensex": "GSENSEX", "gex": "GEX"}


@dataclass(frozen=True, eq=False)
class DatedSeries:
    """An indicator observed on strictly increasing calendar dates."""

    name: str
    dates: tuple[date, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != values.size:
            raise DataError(f"{self.name}: {len(self.dates)} dates but {values.size} values")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                if cur == prev:
                    raise DataError(f"{self.name}: duplicate date {cur.isoformat()}")
                raise DataError(f"{self.name}: dates not increasing at {cur.isoformat()}")

    def __len__(self) -> int:
        return len(self.dates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DatedSeries):
            return NotImplemented
        return (self.name == other.name and self.dates == other.dates
                and np.array_equal(self.values, other.values))

    __hash__ = None

    @property
    def start(self) -> date:
        return self.dates[0]

    @property
    def end(self) -> date:
        return self.dates[-1]

    def is_contiguous(self) -> bool:
        return all(b - a == ONE_DAY for a, b in zip(self.dates, self.dates[1:]))

    def rename(self, name: str) -> "DatedSeries":
        return DatedSeries(name, self.dates, self.values)

    def slice(self, start: date, end: date) -> "DatedSeries":
        keep = [i for i, d in enumerate(self.dates) if start <= d <= end]
        return DatedSeries(self.name, [self.dates[i] for i in keep], self.values[keep])

    def restrict(self, dates: Sequence[date]) -> "DatedSeries":
        index = {d: i for i, d in enumerate(self.dates)}
        try:
            keep = [index[d] for d in dates]
        except KeyError as exc:
            raise CoverageError(f"{self.name}: no observation on {exc.args[0]}", [exc.args[0]])
        return DatedSeries(self.name, list(dates), self.values[keep])


def _parse_date(text: str, line: int, path: str) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError:
        raise ParseError(f"invalid ISO-8601 date {text.strip()!r}", line, path) from None


def _parse_value(text: str, line: int, path: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(f"invalid decimal value {text.strip()!r}", line, path) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {text.strip()!r}", line, path)
    return value


def load_series(path: str | Path, name: str) -> DatedSeries:
    """Read a ``date,value`` CSV (header optional) into a sorted series."""
    path = Path(path)
    rows: list[tuple[date, float]] = []
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != 2:
                raise ParseError(f"expected 2 fields, got {len(record)}", lineno, str(path))
            if lineno == 1 and record[0].strip().lower() == "date":
                continue
            rows.append((_parse_date(record[0], lineno, str(path)),
                         _parse_value(record[1], lineno, str(path))))
    if not rows:
        raise DataError(f"{path}: no observations")
    rows.sort(key=lambda r: r[0])
    for (d0, _), (d1, _) in zip(rows, rows[1:]):
        if d0 == d1:
            raise DataError(f"{path}: duplicate date {d0.isoformat()}")
    return DatedSeries(name, [r[0] for r in rows], [r[1] for r in rows])


def write_series(series: DatedSeries, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        fh.write("date,value\n")
        for d, v in zip(series.dates, series.values):
            fh.write(f"{d.isoformat()},{float(v)!r}\n")


def calendar_days(start: date, end: date) -> list[date]:
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


def align_calendar(series: DatedSeries, start: date, end: date) -> DatedSeries:
    """Put ``series`` on every calendar day of [start, end], forward-filling gaps."""
    if end < start:
        raise DomainError("window end precedes its start")
    if not series.dates or series.start > start:
        raise CoverageError(
            f"{series.name}: no observation on or before {start.isoformat()}", [start])
    out = np.empty((end - start).days + 1)
    days = calendar_days(start, end)
    j = 0
    last = math.nan
    n = len(series)
    for i, day in enumerate(days):
        while j < n and series.dates[j] <= day:
            last = series.values[j]
            j += 1
        out[i] = last
    return DatedSeries(series.name, days, out)


def growth_rate(series: DatedSeries, name: str | None = None) -> DatedSeries:
    """Simple proportional change (x_t - x_{t-1}) / x_{t-1}, dated at t."""
    if len(series) < 2:
        raise DomainError(f"{series.name}: growth rate needs at least 2 observations")
    x = series.values
    if np.any(x <= 0):
        bad = series.dates[int(np.argmax(x <= 0))]
        raise DomainError(f"{series.name}: non-positive level on {bad.isoformat()}")
    g = np.diff(x) / x[:-1]
    return DatedSeries(name or series.name, series.dates[1:], g)


def difference(series: DatedSeries, order: int = 1) -> DatedSeries:
    if order < 1:
        raise DomainError("difference order must be a positive integer")
    if len(series) <= order:
        raise DomainError(f"{series.name}: {len(series)} observations cannot be differenced {order} time(s)")
    return DatedSeries(series.name, series.dates[order:], np.diff(series.values, n=order))


@dataclass(frozen=True)
class StudyWindow:
    id: str
    start: date
    end: date
    label: str

    @property
    def days(self) -> int:
        return (self.end - self.start).days + 1

    @property
    def title(self) -> str:
        return f"Round {self.id}: {self.label} ({self.start.isoformat()} .. {self.end.isoformat()})"


@dataclass(frozen=True, eq=False)
class StudyFrame:
    """Growth columns of one window.

    ``growth`` keeps the undifferenced growth rates (one value per window day).
    ``columns`` holds the model variables: each growth column, first-differenced
    where the stationarity policy asked for it, cut to the common date index.
    """

    window: StudyWindow
    growth: Mapping[str, DatedSeries]
    columns: Mapping[str, DatedSeries]
    differenced: Mapping[str, bool]

    @property
    def growthc(self) -> DatedSeries:
        return self.columns["growthc"]

    @property
    def gsensex(self) -> DatedSeries:
        return self.columns["gsensex"]

    @property
    def gex(self) -> DatedSeries:
        return self.columns["gex"]

    @property
    def dates(self) -> tuple[date, ...]:
        return self.columns[VARIABLES[0]].dates

    def column_label(self, name: str) -> str:
        label = DISPLAY_NAMES.get(name, name.upper())
        return f"D({label})" if self.differenced.get(name) else label

    def matrix(self, names: Iterable[str] = VARIABLES) -> np.ndarray:
        return np.column_stack([self.columns[n].values for n in names])


# name, series -> True when the series is stationary as it stands
StationarityPolicy = Callable[[str, DatedSeries], bool]


def growth_columns(window: StudyWindow, cases: DatedSeries, index: DatedSeries,
                   fx: DatedSeries) -> dict[str, DatedSeries]:
    """Growth rates of the three levels on every day of the window."""
    before = window.start - ONE_DAY
    out = {}
    for name, level in zip(VARIABLES, (cases, index, fx)):
        aligned = align_calendar(level, before, window.end)
        out[name] = growth_rate(aligned, name)
    return out


def build_frame(window: StudyWindow, cases: DatedSeries, index: DatedSeries, fx: DatedSeries,
                policy: StationarityPolicy | None | str = "adf") -> StudyFrame:
    """Assemble the model variables of one window.

    ``policy`` decides per column whether the growth rate is used as is or
    first-differenced: ``"adf"`` (default) applies the 5% ADF rule with the
    default test settings, ``None`` never differences, and any callable
    ``policy(name, series) -> stationary`` can be supplied.
    """
    growth = growth_columns(window, cases, index, fx)
    if policy == "adf":
        from econokit.unitroot import AdfPolicy

        policy = AdfPolicy()
    differenced = {}
    transformed = {}
    for name, g in growth.items():
        stationary = True if policy is None else bool(policy(name, g))
        differenced[name] = not stationary
        transformed[name] = g if stationary else difference(g, 1)
    common_start = max(s.start for s in transformed.values())
    columns = {name: s.slice(common_start, window.end) for name, s in transformed.items()}
    return StudyFrame(window, growth, columns, differenced)
