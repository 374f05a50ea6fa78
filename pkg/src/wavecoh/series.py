"""Uniformly sampled time series: validation, detrending, alignment.

Every function here is pure and every object immutable after construction,
so values can be shared freely across threads. Irregular sampling is
rejected outright rather than resampled; the spectral machinery downstream
assumes an exact uniform grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptySeries,
    IncompatibleGrid,
    NoOverlap,
    NonFiniteValue,
    NonPositiveStep,
    TooShort,
    ZeroVariance,
)

# Tolerance for sample-phase compatibility between two grids, as a fraction
# of dt. Absorbs decimal-year rounding in published files without accepting
# genuinely misaligned grids.
PHASE_TOL = 1e-9


@dataclass(frozen=True)
class TimeSeries:
    """Scalar series sampled at t0 + i*dt (epochs in years, dt > 0)."""

    t0: float
    dt: float
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        if not (self.dt > 0):
            raise NonPositiveStep(f"dt must be positive, got {self.dt!r}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise EmptySeries("series needs at least one sample")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NonFiniteValue(int(bad[0]), values[bad[0]])
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def t_end(self) -> float:
        """Epoch of the last sample."""
        return self.t0 + (self.n - 1) * self.dt

    @property
    def span(self) -> float:
        """Observation span n*dt (one sample interval past t_end - t0)."""
        return self.n * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)


@dataclass(frozen=True)
class OverlapPair:
    """Two series trimmed onto an identical grid (same t0, dt, length)."""

    a: TimeSeries
    b: TimeSeries

    def __post_init__(self):
        if self.a.t0 != self.b.t0 or self.a.dt != self.b.dt or self.a.n != self.b.n:
            raise IncompatibleGrid("overlap pair members must share t0, dt and length")


def new_series(t0: float, dt: float, values, label: str = "") -> TimeSeries:
    """Construct a validated TimeSeries."""
    return TimeSeries(t0=t0, dt=dt, values=values, label=label)


def mean_epoch(series: TimeSeries) -> float:
    """Midpoint of the observation window, t0 + dt*(N-1)/2."""
    return series.t0 + series.dt * (series.n - 1) / 2.0


def detrend_linear(series: TimeSeries) -> TimeSeries:
    """Subtract the least-squares straight line.

    The result has exactly zero mean and zero LS slope. Times are centered
    on the mean epoch before fitting, which makes the two normal equations
    decouple (the centered time axis is orthogonal to the constant).
    """
    if series.n < 2:
        raise TooShort("detrending needs at least 2 samples")
    y = series.values
    tau = (np.arange(series.n) - (series.n - 1) / 2.0) * series.dt
    slope = float(tau @ y) / float(tau @ tau)
    out = y - y.mean() - slope * tau
    return TimeSeries(series.t0, series.dt, out, series.label)


def standardize(series: TimeSeries) -> TimeSeries:
    """Rescale to zero mean and unit sample variance (divisor N-1)."""
    if series.n < 2:
        raise ZeroVariance("sample variance undefined for fewer than 2 samples")
    y = series.values
    var = float(np.var(y, ddof=1))
    if var == 0.0:
        raise ZeroVariance(f"series {series.label!r} is constant")
    out = (y - y.mean()) / np.sqrt(var)
    return TimeSeries(series.t0, series.dt, out, series.label)


def overlap(a: TimeSeries, b: TimeSeries) -> OverlapPair:
    """Trim both series to their maximal common interval.

    Requires equal dt and sample phases aligned within PHASE_TOL*dt, and an
    intersection of at least 2 samples.
    """
    if abs(a.dt - b.dt) > PHASE_TOL * a.dt:
        raise IncompatibleGrid(f"sampling steps differ: {a.dt} vs {b.dt}")
    dt = a.dt
    offset = (b.t0 - a.t0) / dt
    if abs(offset - round(offset)) > PHASE_TOL:
        raise IncompatibleGrid(
            f"sample phases misaligned by {abs(offset - round(offset)) * dt:g} years"
        )
    shift = int(round(offset))  # b sample i sits at a index i + shift

    # Index range of the intersection, expressed on a's grid.
    lo = max(0, shift)
    hi = min(a.n - 1, shift + b.n - 1)
    count = hi - lo + 1
    if count < 2:
        raise NoOverlap(
            f"series {a.label!r} ({a.t0}..{a.t_end}) and {b.label!r} "
            f"({b.t0}..{b.t_end}) share fewer than 2 samples"
        )
    start = a.t0 + lo * dt
    ta = TimeSeries(start, dt, a.values[lo : hi + 1], a.label)
    tb = TimeSeries(start, dt, b.values[lo - shift : hi - shift + 1], b.label)
    return OverlapPair(ta, tb)
