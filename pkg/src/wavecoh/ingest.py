"""Parsers for the two public annual datasets plus a generic loader.

The irradiance loader expects the LISIRD NRL2 annual export (CSV, one
header row, decimal-year stamps); the ocean-index loader expects the NOAA
paleo reconstruction layout (prose preamble, whitespace-separated year and
value rows). Both produce strictly annual series; files are local paths,
never URLs (see the README for where to fetch them).

One tolerant field scanner serves all formats: commas are treated as
whitespace, so CSV and space-separated files go through identical rules.
Rows carrying missing-value sentinels are rejected with their line number;
gaps are never interpolated here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    EmptyAfterParse,
    FileUnreadable,
    HeaderOnlyFile,
    MalformedRow,
    NonUniformStep,
    SpanMismatch,
)
from .series import TimeSeries

SOURCE_KINDS = ("tsi-lisird", "amo-ncei", "generic-two-column")

DEFAULT_SENTINELS = (-99.99, -999.9, -9999.0)

# Relative tolerance for uniform-step and span checks.
_GRID_TOL = 1e-9


@dataclass(frozen=True)
class DatasetDescriptor:
    """Where and how to read a two-column series."""

    source_kind: str
    path: str
    column_time: int = 0
    column_value: int = 1
    expected_span: tuple[float, float] | None = None
    missing_sentinels: tuple[float, ...] = DEFAULT_SENTINELS

    def __post_init__(self):
        if self.source_kind not in SOURCE_KINDS:
            raise ValueError(f"source_kind must be one of {SOURCE_KINDS}")
        if self.column_time == self.column_value:
            raise ValueError("time and value columns must differ")
        if self.column_time < 0 or self.column_value < 0:
            raise ValueError("column indices must be non-negative")


def _read_lines(path) -> list[str]:
    try:
        return Path(path).read_text().splitlines()
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc


def _fields(line: str) -> list[str]:
    return line.replace(",", " ").split()


def _parse_float(token: str) -> float | None:
    try:
        value = float(token)
    except ValueError:
        return None
    return value


def _is_integer_like(value: float) -> bool:
    return math.isfinite(value) and abs(value - round(value)) <= 1e-6


def _extract_row(fields, desc, lineno):
    """Pull (time, value) out of a known-data row, validating both."""
    width = max(desc.column_time, desc.column_value) + 1
    if len(fields) < width:
        raise MalformedRow(lineno, f"expected at least {width} columns, found {len(fields)}")
    t = _parse_float(fields[desc.column_time])
    v = _parse_float(fields[desc.column_value])
    if t is None or v is None or not (math.isfinite(t) and math.isfinite(v)):
        raise MalformedRow(lineno, f"non-numeric fields in {fields!r}")
    if any(v == s for s in desc.missing_sentinels):
        raise MalformedRow(lineno, f"missing-value sentinel {v:g}")
    return t, v


def _check_span(desc: DatasetDescriptor, series: TimeSeries) -> TimeSeries:
    if desc.expected_span is not None:
        first, last = desc.expected_span
        tol = _GRID_TOL * max(1.0, abs(series.dt))
        if abs(series.t0 - first) > tol or abs(series.t_end - last) > tol:
            raise SpanMismatch(
                f"expected span {first:g}..{last:g}, file covers "
                f"{series.t0:g}..{series.t_end:g}"
            )
    return series


def _load_annual_header(desc: DatasetDescriptor, label: str) -> TimeSeries:
    """Fixed layout: one header line, then annual (time, value) rows.

    Fractional epochs such as mid-year stamps are floored to integer
    years; years must then advance by exactly 1.
    """
    lines = _read_lines(desc.path)
    years: list[int] = []
    values: list[float] = []
    body = False
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if not body:
            body = True  # header row
            continue
        t, v = _extract_row(_fields(line), desc, lineno)
        year = math.floor(t)
        if years and year != years[-1] + 1:
            raise NonUniformStep(lineno, f"year {year} after {years[-1]} breaks the annual grid")
        years.append(year)
        values.append(v)
    if not values:
        raise EmptyAfterParse(f"no data rows in {desc.path}")
    return _check_span(desc, TimeSeries(float(years[0]), 1.0, values, label))


def _load_annual_prose(desc: DatasetDescriptor, label: str) -> TimeSeries:
    """NOAA paleo layout: arbitrary prose, then annual (year, value) rows.

    A line is data when it has enough numeric fields and an integer-like
    year in the time column; everything else is skipped as prose.
    """
    lines = _read_lines(desc.path)
    width = max(desc.column_time, desc.column_value) + 1
    years: list[int] = []
    values: list[float] = []
    saw_text = False
    for lineno, line in enumerate(lines, start=1):
        fields = _fields(line)
        if not fields:
            continue
        saw_text = True
        if len(fields) < width:
            continue
        t = _parse_float(fields[desc.column_time])
        v = _parse_float(fields[desc.column_value])
        if t is None or v is None or not _is_integer_like(t):
            continue
        _t, v = _extract_row(fields, desc, lineno)  # sentinel and finiteness checks
        year = round(t)
        if years and year != years[-1] + 1:
            raise NonUniformStep(lineno, f"year {year} after {years[-1]} breaks the annual grid")
        years.append(year)
        values.append(v)
    if not values:
        if saw_text:
            raise HeaderOnlyFile(f"no data rows among {len(lines)} lines in {desc.path}")
        raise EmptyAfterParse(f"{desc.path} is empty")
    return _check_span(desc, TimeSeries(float(years[0]), 1.0, values, label))


def _load_two_column(desc: DatasetDescriptor, label: str) -> TimeSeries:
    """Generic uniform series: prose skipped by content, dt inferred."""
    lines = _read_lines(desc.path)
    width = max(desc.column_time, desc.column_value) + 1
    times: list[float] = []
    values: list[float] = []
    rows: list[int] = []
    saw_text = False
    for lineno, line in enumerate(lines, start=1):
        fields = _fields(line)
        if not fields:
            continue
        saw_text = True
        if len(fields) < width:
            continue
        t = _parse_float(fields[desc.column_time])
        v = _parse_float(fields[desc.column_value])
        if t is None or v is None:
            continue
        _t, v = _extract_row(fields, desc, lineno)
        times.append(t)
        values.append(v)
        rows.append(lineno)
    if not values:
        if saw_text:
            raise HeaderOnlyFile(f"no data rows among {len(lines)} lines in {desc.path}")
        raise EmptyAfterParse(f"{desc.path} is empty")
    if len(values) < 2:
        raise NonUniformStep(rows[0], "cannot infer the sampling step from a single data row")
    dt = times[1] - times[0]
    if dt <= 0:
        raise NonUniformStep(rows[1], f"non-increasing time axis (step {dt:g})")
    for i in range(2, len(times)):
        if abs(times[i] - (times[0] + i * dt)) > _GRID_TOL * abs(dt) * max(1.0, i):
            raise NonUniformStep(rows[i], f"time {times[i]:g} is off the uniform grid")
    return _check_span(desc, TimeSeries(times[0], dt, values, label))


def load_generic(desc: DatasetDescriptor) -> TimeSeries:
    """Load per the descriptor; the kind selects the row rules."""
    if desc.source_kind == "tsi-lisird":
        return _load_annual_header(desc, "TSI")
    if desc.source_kind == "amo-ncei":
        return _load_annual_prose(desc, "AMO")
    return _load_two_column(desc, Path(desc.path).stem)


def load_tsi(path) -> TimeSeries:
    """Annual total solar irradiance from a LISIRD NRL2 export."""
    return load_generic(DatasetDescriptor(source_kind="tsi-lisird", path=str(path)))


def load_amo(path) -> TimeSeries:
    """Annual ocean-temperature index from the NOAA paleo reconstruction file."""
    return load_generic(DatasetDescriptor(source_kind="amo-ncei", path=str(path)))
