"""Partial Fourier approximation: least-squares trend + harmonic fitting.

The model fitted to a series y(t) is

    F(t) = f0 + f1*(t - t0) + sum_{k=1..n} a_k sin(w_k (t - t0))
                            + sum_{k=1..n} b_k cos(w_k (t - t0))

with w_k = 2*pi*k/P0 and t0 the mean observation epoch. Unlike a plain DFT,
the base period P0 is a free choice and the solve yields standard errors
for every coefficient, which is what makes narrow-band extraction and
band-to-band comparison possible. Harmonics k in [m1, m2] cover angular
frequencies 2*pi*m1/P0 .. 2*pi*m2/P0, i.e. periods P0/m2 .. P0/m1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BandOutOfRange,
    LengthMismatch,
    SingularNormalMatrix,
    Underdetermined,
    ZeroVariance,
)
from .series import TimeSeries, mean_epoch

# Cap on the default harmonic count; 120 harmonics of a millennial base
# period resolve ~10-year oscillations, short enough for annual data.
MAX_DEFAULT_HARMONICS = 120

# Relative singular-value cutoff below which the design matrix is
# reported as singular rather than silently regularized.
_RANK_TOL = 1e-12


@dataclass(frozen=True)
class BandSpec:
    """Inclusive harmonic index range [m1, m2], 1-based."""

    m1: int
    m2: int

    def __post_init__(self):
        if not (1 <= self.m1 <= self.m2):
            raise BandOutOfRange(f"need 1 <= m1 <= m2, got [{self.m1}, {self.m2}]")


@dataclass(frozen=True)
class PfaModel:
    """Fitted coefficients and their least-squares standard errors.

    coeffs[k-1] = (a_k, b_k) and sigma[k-1] holds the matching standard
    errors; trend_sigma holds the errors of (f0, f1).
    """

    p0: float
    t0: float
    f0: float
    f1: float
    coeffs: np.ndarray
    sigma: np.ndarray
    trend_sigma: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        if coeffs.ndim != 2 or coeffs.shape[1] != 2 or coeffs.shape[0] < 1:
            raise ValueError("coeffs must have shape (n, 2) with n >= 1")
        if sigma.shape != coeffs.shape:
            raise ValueError("sigma must match coeffs shape")
        if not self.p0 > 0:
            raise ValueError("P0 must be positive")
        for name, arr in (("coeffs", coeffs), ("sigma", sigma)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        ts = np.asarray(self.trend_sigma, dtype=float).copy()
        ts.setflags(write=False)
        object.__setattr__(self, "trend_sigma", ts)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]


def _design_matrix(tau: np.ndarray, p0: float, n: int) -> np.ndarray:
    """Columns: 1, tau, then interleaved (sin_k, cos_k) for k = 1..n."""
    cols = np.empty((tau.size, 2 * n + 2))
    cols[:, 0] = 1.0
    cols[:, 1] = tau
    k = np.arange(1, n + 1)
    args = np.outer(tau, 2.0 * np.pi * k / p0)
    cols[:, 2::2] = np.sin(args)
    cols[:, 3::2] = np.cos(args)
    return cols


def default_harmonics(n_samples: int) -> int:
    return min((n_samples - 2) // 2, MAX_DEFAULT_HARMONICS)


def fit_pfa(series: TimeSeries, p0: float | None = None, n: int | None = None) -> PfaModel:
    """Least-squares fit of the trend + harmonic model.

    p0 defaults to the observation span N*dt; n defaults to
    floor((N-2)/2) capped at MAX_DEFAULT_HARMONICS. The solve uses the
    SVD of the design matrix (never the explicit normal equations), and
    reports the condition number when the matrix is rank deficient.
    """
    if p0 is None:
        p0 = series.span
    if not p0 > 0:
        raise ValueError(f"P0 must be positive, got {p0!r}")
    if n is None:
        n = default_harmonics(series.n)
    if n < 1:
        raise Underdetermined(f"need at least 1 harmonic (series has {series.n} samples)")
    n_params = 2 * n + 2
    if series.n < n_params:
        raise Underdetermined(
            f"{n} harmonics need at least {n_params} samples, series has {series.n}"
        )

    t0 = mean_epoch(series)
    tau = series.times - t0
    a = _design_matrix(tau, p0, n)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s[-1] <= _RANK_TOL * s[0]:
        cond = np.inf if s[-1] == 0 else s[0] / s[-1]
        raise SingularNormalMatrix(cond)
    coef = vt.T @ ((u.T @ series.values) / s)

    resid = series.values - a @ coef
    dof = series.n - n_params
    resid_var = float(resid @ resid) / dof if dof > 0 else 0.0
    # diag of (A^T A)^-1 via the SVD factors
    diag_inv = np.sum((vt / s[:, None]) ** 2, axis=0)
    err = np.sqrt(resid_var * diag_inv)

    return PfaModel(
        p0=float(p0),
        t0=t0,
        f0=float(coef[0]),
        f1=float(coef[1]),
        coeffs=np.column_stack([coef[2::2], coef[3::2]]),
        sigma=np.column_stack([err[2::2], err[3::2]]),
        trend_sigma=err[:2],
    )


def evaluate_pfa(model: PfaModel, times) -> np.ndarray:
    """Evaluate the full fitted model (trend plus all harmonics)."""
    tau = np.asarray(times, dtype=float) - model.t0
    out = model.f0 + model.f1 * tau
    k = np.arange(1, model.n + 1)
    args = np.outer(tau, 2.0 * np.pi * k / model.p0)
    out = out + np.sin(args) @ model.coeffs[:, 0] + np.cos(args) @ model.coeffs[:, 1]
    return out


def band_component(model: PfaModel, band: BandSpec, times) -> np.ndarray:
    """Partial sum restricted to harmonics k in [m1, m2]; excludes the trend."""
    if band.m2 > model.n:
        raise BandOutOfRange(f"band [{band.m1}, {band.m2}] exceeds model harmonics n={model.n}")
    tau = np.asarray(times, dtype=float) - model.t0
    k = np.arange(band.m1, band.m2 + 1)
    args = np.outer(tau, 2.0 * np.pi * k / model.p0)
    sl = slice(band.m1 - 1, band.m2)
    return np.sin(args) @ model.coeffs[sl, 0] + np.cos(args) @ model.coeffs[sl, 1]


def band_periods(model: PfaModel, band: BandSpec) -> tuple[float, float]:
    """(shortest, longest) period in the band: (P0/m2, P0/m1)."""
    if band.m2 > model.n:
        raise BandOutOfRange(f"band [{band.m1}, {band.m2}] exceeds model harmonics n={model.n}")
    return model.p0 / band.m2, model.p0 / band.m1


def band_correlation(x, y) -> float:
    """Pearson correlation of two equally sampled band reconstructions."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"shapes differ: {x.shape} vs {y.shape}")
    if x.size < 3:
        raise LengthMismatch("correlation needs at least 3 samples")
    dx = x - x.mean()
    dy = y - y.mean()
    vx = float(dx @ dx)
    vy = float(dy @ dy)
    if vx == 0.0 or vy == 0.0:
        raise ZeroVariance("band correlation undefined for a constant input")
    r = float(dx @ dy) / np.sqrt(vx * vy)
    return float(min(1.0, max(-1.0, r)))
