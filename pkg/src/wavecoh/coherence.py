"""Cross-wavelet spectrum, smoothing operator, squared coherency, phase.

Squared coherency is the magnitude-squared of the smoothed cross-wavelet
spectrum normalized by the two smoothed auto power spectra,

    R2 = |S(W_xy / s)|^2 / ( S(|W_x|^2 / s) * S(|W_y|^2 / s) ),

where the 1/s factor converts coefficients to an energy density and S
smooths along both axes: a convolution in time with the absolute value of
the Morlet daughter at each scale (truncated at three e-folding times),
then a boxcar average across scales. Each kernel carries unit total
weight, with edges renormalized by the actual kernel overlap. Without S
the ratio is identically 1, which is why the smoothing widths are recorded
in the result.

Phase is the four-quadrant angle of the same smoothed cross spectrum;
positive values mean the first series leads the second at that time and
scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import log10

import numpy as np

from .cwt import EFOLD_SCALES, ScaleGrid, WaveletSpectrum
from .errors import DimensionMismatch, GridMismatch

TIME_KERNELS = ("morlet-envelope", "delta")

# Smoothed auto powers below this are reported as undefined rather than
# divided through; only renormalized far edges can underflow this hard.
DEGENERATE_POWER = 1e-300


def scale_smoothing_window(voices_per_octave: int, decades: float = 0.6) -> int:
    """Boxcar width in voices covering `decades` decades of scale, odd."""
    width = int(round(decades * voices_per_octave / log10(2.0)))
    if width % 2 == 0:
        width -= 1
    return max(1, width)


@dataclass(frozen=True)
class SmoothingSpec:
    """Reproducibility record of the smoothing operator S."""

    scale_window: int
    time_kernel: str = "morlet-envelope"
    efolding_truncate: float = 3.0

    def __post_init__(self):
        if self.time_kernel not in TIME_KERNELS:
            raise ValueError(f"time_kernel must be one of {TIME_KERNELS}")
        if self.scale_window < 1 or self.scale_window % 2 == 0:
            raise ValueError("scale_window must be a positive odd voice count")
        if not self.efolding_truncate > 0:
            raise ValueError("efolding_truncate must be positive")

    @classmethod
    def default_for(cls, grid: ScaleGrid) -> "SmoothingSpec":
        return cls(scale_window=scale_smoothing_window(grid.voices_per_octave))

    @classmethod
    def delta(cls) -> "SmoothingSpec":
        """No-op smoothing; degenerates coherency to 1 (regression aid)."""
        return cls(scale_window=1, time_kernel="delta")


@dataclass(frozen=True)
class CrossSpectrum:
    """Elementwise W_x * conj(W_y) on a shared grid."""

    grid: ScaleGrid
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.grid.num_scales, self.times.size):
            raise DimensionMismatch("cross spectrum must be num_scales x num_times")


@dataclass(frozen=True)
class CoherenceResult:
    """Squared coherency and phase with their COI and smoothing record.

    Undefined entries (degenerate denominators) are NaN in both r2 and
    phase; `defined` gives the validity mask.
    """

    r2: np.ndarray
    phase: np.ndarray
    grid: ScaleGrid
    times: np.ndarray
    coi: np.ndarray
    smoothing: SmoothingSpec

    @property
    def defined(self) -> np.ndarray:
        return np.isfinite(self.r2)

    @property
    def periods(self) -> np.ndarray:
        return self.grid.periods


def _require_same_grid(wx: WaveletSpectrum, wy: WaveletSpectrum):
    if (
        not np.array_equal(wx.grid.scales, wy.grid.scales)
        or not np.array_equal(wx.times, wy.times)
        or wx.dt != wy.dt
        or wx.params != wy.params
    ):
        raise GridMismatch("spectra must share scale grid, time axis and wavelet parameters")


def cross_spectrum(wx: WaveletSpectrum, wy: WaveletSpectrum) -> CrossSpectrum:
    """Cross-wavelet spectrum W_x * conj(W_y)."""
    _require_same_grid(wx, wy)
    return CrossSpectrum(grid=wx.grid, times=wx.times, values=wx.coeffs * np.conj(wy.coeffs))


@lru_cache(maxsize=8)
def _time_smoother(scales_key: tuple, dt: float, n: int, truncate: float):
    """FFT image of the per-scale |Morlet| time kernels plus edge weights."""
    scales = np.asarray(scales_key)
    support = np.minimum(
        np.floor(truncate * EFOLD_SCALES * scales / dt).astype(int), n - 1
    )
    ell = 1 << int(n + support.max()).bit_length()
    lags = np.fft.fftfreq(ell, d=1.0 / ell)  # signed integer lags
    tau = lags[None, :] * dt
    kern = np.exp(-0.5 * (tau / scales[:, None]) ** 2)
    kern[np.abs(lags)[None, :] > support[:, None]] = 0.0
    kfft = np.fft.fft(kern, axis=1)
    ones = np.fft.fft(np.ones(n), n=ell)
    weight = np.fft.ifft(ones[None, :] * kfft, axis=1)[:, :n].real
    return kfft, weight, ell


def _smooth_time(field: np.ndarray, scales: np.ndarray, dt: float, spec: SmoothingSpec) -> np.ndarray:
    kfft, weight, ell = _time_smoother(
        tuple(scales.tolist()), dt, field.shape[1], spec.efolding_truncate
    )
    num = np.fft.ifft(np.fft.fft(field, n=ell, axis=1) * kfft, axis=1)[:, : field.shape[1]]
    return num / weight


def _smooth_scale(field: np.ndarray, window: int) -> np.ndarray:
    half = window // 2
    n_scales = field.shape[0]
    csum = np.concatenate([np.zeros((1, field.shape[1]), dtype=field.dtype), np.cumsum(field, axis=0)])
    j = np.arange(n_scales)
    lo = np.clip(j - half, 0, None)
    hi = np.clip(j + half, None, n_scales - 1)
    return (csum[hi + 1] - csum[lo]) / (hi - lo + 1)[:, None]


def smooth(field: np.ndarray, grid: ScaleGrid, dt: float, spec: SmoothingSpec) -> np.ndarray:
    """Apply the smoothing operator S along time, then along scale.

    Real input yields real output. Edges are renormalized by the summed
    kernel weight actually overlapping the field, so a constant field
    passes through unchanged.
    """
    field = np.asarray(field)
    if field.ndim != 2 or field.shape[0] != grid.num_scales:
        raise DimensionMismatch(
            f"field shape {field.shape} does not match grid with {grid.num_scales} scales"
        )
    was_real = not np.iscomplexobj(field)
    out = field
    if spec.time_kernel != "delta":
        out = _smooth_time(out, grid.scales, dt, spec)
        if was_real:
            out = out.real
    if spec.scale_window > 1:
        out = _smooth_scale(out, spec.scale_window)
    return out


def phase(smoothed_cross: np.ndarray) -> np.ndarray:
    """Four-quadrant angle of the smoothed cross spectrum, in (-pi, pi].

    Zero entries give phase 0; callers track undefined cells separately.
    """
    ang = np.arctan2(smoothed_cross.imag, smoothed_cross.real)
    return np.where(ang == -np.pi, np.pi, ang)


def coherence(wx: WaveletSpectrum, wy: WaveletSpectrum, spec: SmoothingSpec) -> CoherenceResult:
    """Wavelet-squared coherency and phase of two spectra."""
    _require_same_grid(wx, wy)
    grid, dt = wx.grid, wx.dt
    inv_s = (1.0 / grid.scales)[:, None]

    cross = wx.coeffs * np.conj(wy.coeffs)
    s_xy = smooth(inv_s * cross, grid, dt, spec)
    p_x = wx.coeffs.real**2 + wx.coeffs.imag**2
    p_y = wy.coeffs.real**2 + wy.coeffs.imag**2
    s_xx = smooth(inv_s * p_x, grid, dt, spec)
    s_yy = smooth(inv_s * p_y, grid, dt, spec)

    denom = s_xx * s_yy
    undefined = ~(denom > 0) | ((s_xx < DEGENERATE_POWER) & (s_yy < DEGENERATE_POWER))
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = (s_xy.real**2 + s_xy.imag**2) / denom
    r2 = np.clip(r2, 0.0, 1.0)
    ang = phase(s_xy)
    r2[undefined] = np.nan
    ang = np.where(undefined, np.nan, ang)

    return CoherenceResult(
        r2=r2,
        phase=ang,
        grid=grid,
        times=wx.times.copy(),
        coi=wx.coi.copy(),
        smoothing=spec,
    )
