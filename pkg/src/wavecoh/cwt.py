"""Morlet continuous wavelet transform.

The mother wavelet is a complex carrier under a Gaussian envelope,

    psi(t) = exp(i*2*pi*f0*t) * exp(-4*ln(2)*t^2 / h^2),

parameterized by the carrier frequency f0 and the envelope full-width at
half-maximum h. Internally the transform works with the equivalent
unit-envelope form psi0(eta) = exp(i*omega0*eta - eta^2/2), where
omega0 = 2*pi*f0*sigma_t and sigma_t = h / (2*sqrt(2*ln 2)) is the Gaussian
standard deviation. Grid scales are expressed in envelope-width units: the
daughter at scale s has a Gaussian envelope of standard deviation s in time
units, so the familiar conversion period = scale * fourier_factor holds
with fourier_factor = 4*pi / (omega0 + sqrt(2 + omega0^2)).

Daughters are L2-normalized in the frequency domain, which makes the
expected scalogram power of white noise flat across scales; that is the
property that keeps per-scale significance thresholds comparable.

The transform runs as a frequency-domain multiplication after zero-padding
to the next higher power of two. Padded coefficients are discarded and the
cone of influence marks the edge contamination that remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import GridTooSparse, ScaleBelowNyquist, SeriesTooShort
from .series import TimeSeries

# Least omega0 for which the Morlet's nonzero mean is negligible: the
# spectral leakage at omega = 0 is exp(-omega0^2/2) <= e^-12.5.
MIN_OMEGA0 = 5.0

# Amplitude e-folding time of the daughter envelope is sqrt(2)*scale.
EFOLD_SCALES = math.sqrt(2.0)


@dataclass(frozen=True)
class MorletParams:
    """Morlet mother wavelet: carrier frequency f0, envelope FWHM h.

    The mother itself is defined for any positive (f0, h); the transform
    and reconstruction additionally require omega0 >= MIN_OMEGA0, where
    the wavelet's nonzero mean is negligible. That check happens where
    the approximation is consumed (see _require_admissible).
    """

    f0: float
    h: float

    def __post_init__(self):
        if not (self.f0 > 0 and self.h > 0):
            raise ValueError("f0 and h must be positive")

    @property
    def sigma_t(self) -> float:
        """Gaussian envelope standard deviation implied by the FWHM."""
        return self.h / (2.0 * math.sqrt(2.0 * math.log(2.0)))

    @property
    def omega0(self) -> float:
        """Nondimensional center frequency at unit scale."""
        return 2.0 * math.pi * self.f0 * self.sigma_t

    @property
    def fourier_factor(self) -> float:
        """Multiplier taking a scale to its equivalent Fourier period."""
        w0 = self.omega0
        return 4.0 * math.pi / (w0 + math.sqrt(2.0 + w0 * w0))

    @classmethod
    def from_omega0(cls, omega0: float = 6.0) -> "MorletParams":
        """Unit-envelope parameterization: sigma_t = 1, carrier omega0/(2*pi)."""
        h = 2.0 * math.sqrt(2.0 * math.log(2.0))
        return cls(f0=omega0 / (2.0 * math.pi), h=h)


DEFAULT_PARAMS = MorletParams.from_omega0(6.0)


def _require_admissible(params: MorletParams):
    if params.omega0 < MIN_OMEGA0:
        raise ValueError(
            f"omega0 = 2*pi*f0*sigma_t = {params.omega0:.3f} is below {MIN_OMEGA0}; "
            "the zero-mean/admissibility approximation breaks down"
        )


def morlet_time(t, params: MorletParams) -> np.ndarray:
    """Mother wavelet in the time domain (no amplitude normalization)."""
    t = np.asarray(t, dtype=float)
    return np.exp(2j * np.pi * params.f0 * t) * np.exp(-4.0 * math.log(2.0) * t * t / (params.h * params.h))


def morlet_freq(omega, scale: float, params: MorletParams) -> np.ndarray:
    """Peak-normalized spectral envelope of the daughter dilated by `scale`.

    A Gaussian of unit height centered at omega = 2*pi*f0/scale with
    standard deviation 1/(scale*sigma_t). The transform kernel is this
    envelope times the L2 normalization constant.
    """
    omega = np.asarray(omega, dtype=float)
    u = scale * params.sigma_t * omega - params.omega0
    return np.exp(-0.5 * u * u)


def scale_to_period(scale, params: MorletParams):
    """Equivalent Fourier period of a scale (both in time units)."""
    return np.asarray(scale, dtype=float) * params.fourier_factor


def period_to_scale(period, params: MorletParams):
    return np.asarray(period, dtype=float) / params.fourier_factor


@dataclass(frozen=True)
class ScaleGrid:
    """Logarithmic scale ladder s_j = s0 * 2^(j / voices_per_octave)."""

    s0: float
    voices_per_octave: int
    num_scales: int
    scales: np.ndarray
    fourier_factor: float

    def __post_init__(self):
        if self.s0 <= 0 or self.voices_per_octave < 1 or self.num_scales < 1:
            raise ValueError("scale grid needs s0 > 0, voices >= 1, num_scales >= 1")
        scales = np.asarray(self.scales, dtype=float).copy()
        if np.any(np.diff(scales) <= 0):
            raise ValueError("scales must be strictly increasing")
        scales.setflags(write=False)
        object.__setattr__(self, "scales", scales)

    @property
    def periods(self) -> np.ndarray:
        return self.scales * self.fourier_factor


def log_scale_grid(
    s0: float, voices_per_octave: int, octaves: int, params: MorletParams
) -> ScaleGrid:
    """Grid covering `octaves` octaves above s0 at the given voice density."""
    num = octaves * voices_per_octave + 1
    j = np.arange(num)
    scales = s0 * 2.0 ** (j / voices_per_octave)
    return ScaleGrid(
        s0=float(s0),
        voices_per_octave=voices_per_octave,
        num_scales=num,
        scales=scales,
        fourier_factor=params.fourier_factor,
    )


def default_grid(dt: float, params: MorletParams, voices_per_octave: int = 12, octaves: int = 8) -> ScaleGrid:
    """Nyquist-anchored default: s0 = 2*dt, 8 octaves, 12 voices per octave."""
    return log_scale_grid(2.0 * dt, voices_per_octave, octaves, params)


@dataclass(frozen=True)
class WaveletSpectrum:
    """Complex CWT coefficients (scale-major) with the cone of influence."""

    grid: ScaleGrid
    times: np.ndarray
    coeffs: np.ndarray
    coi: np.ndarray
    dt: float
    params: MorletParams

    def __post_init__(self):
        for name in ("times", "coeffs", "coi"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.coeffs.shape != (self.grid.num_scales, self.times.size):
            raise ValueError("coefficient matrix must be num_scales x num_times")

    @property
    def periods(self) -> np.ndarray:
        return self.grid.periods


def coi(n: int, dt: float, params: MorletParams) -> np.ndarray:
    """Maximum trustworthy period at each time index.

    At distance d from the nearer series edge, coefficients of period p are
    contaminated once the amplitude e-folding support sqrt(2)*scale(p)
    reaches the edge; solving for p gives p = d * fourier_factor / sqrt(2).
    Zero at both ends, symmetric about the midpoint.
    """
    if n < 2:
        raise SeriesTooShort("cone of influence needs at least 2 samples")
    idx = np.arange(n)
    dist = np.minimum(idx, n - 1 - idx) * dt
    return dist * params.fourier_factor / EFOLD_SCALES


def _padded_length(n: int) -> int:
    """Next higher power of two (doubles when n is already a power of two)."""
    return 2 ** (int(math.floor(math.log2(n))) + 1)


def _freq_kernels(scales: np.ndarray, omega: np.ndarray, dt: float, params: MorletParams) -> np.ndarray:
    """L2-normalized daughter spectra sampled on the FFT frequencies.

    Grid scales are envelope widths, so the dilation applied to the
    FWHM-parameterized mother at scale s_j is s_j / sigma_t.
    """
    norm = np.sqrt(2.0 * np.pi * scales / dt) * np.pi**-0.25
    env = np.stack([morlet_freq(omega, s / params.sigma_t, params) for s in scales])
    return norm[:, None] * env


def cwt(
    series: TimeSeries,
    grid: ScaleGrid,
    params: MorletParams = DEFAULT_PARAMS,
    padding: str = "zero",
) -> WaveletSpectrum:
    """Continuous wavelet transform via frequency-domain multiplication.

    Coefficient [j, i] approximates the inner product of the signal with
    the scale-s_j daughter centered on sample i. With padding="zero" the
    signal is zero-extended to the next higher power of two and the padded
    columns are dropped from the result; padding="none" computes the
    circular transform on the raw length (useful for periodic fixtures).
    """
    _require_admissible(params)
    if series.n < 4:
        raise SeriesTooShort(f"transform needs at least 4 samples, got {series.n}")
    if grid.s0 < 2.0 * series.dt * (1.0 - 1e-12):
        raise ScaleBelowNyquist(
            f"smallest scale {grid.s0:g} is below the Nyquist guard 2*dt = {2 * series.dt:g}"
        )
    if padding not in ("zero", "none"):
        raise ValueError(f"unknown padding policy {padding!r}")

    n = series.n
    p = _padded_length(n) if padding == "zero" else n
    omega = 2.0 * np.pi * np.fft.fftfreq(p, d=series.dt)
    kernels = _freq_kernels(grid.scales, omega, series.dt, params)
    spectrum = np.fft.fft(series.values, n=p)
    coeffs = np.fft.ifft(spectrum[None, :] * kernels, axis=1)[:, :n]
    return WaveletSpectrum(
        grid=grid,
        times=series.times,
        coeffs=coeffs,
        coi=coi(n, series.dt, params),
        dt=series.dt,
        params=params,
    )


def power(spec: WaveletSpectrum) -> np.ndarray:
    """Scalogram: squared coefficient magnitudes."""
    return np.abs(spec.coeffs) ** 2


@lru_cache(maxsize=32)
def admissibility_constant(omega0: float) -> float:
    """C_psi = integral over omega > 0 of |psi0_hat(omega)|^2 / omega.

    For the unit-envelope mother, |psi0_hat(omega)|^2 = 2*pi*exp(-(omega-omega0)^2).
    The negative-frequency tail is below e^(-omega0^2) and is ignored.
    """
    val, _ = quad(
        lambda w: 2.0 * np.pi * math.exp(-((w - omega0) ** 2)) / w,
        1e-12,
        omega0 + 30.0,
        points=[omega0],
        limit=200,
    )
    return val


def reconstruct(spec: WaveletSpectrum) -> TimeSeries:
    """Invert the transform by discretizing the double reconstruction integral.

    The integral over scale and translation, weighted by da*db/a^2 and the
    admissibility constant, is approximated by sums over the stored grid:
    da_j = s_j * ln(2) / voices_per_octave on the logarithmic ladder and
    db = dt. Only the real part survives for real input signals (the
    analytic mother doubles the positive-frequency content).
    """
    vpo = spec.grid.voices_per_octave
    if vpo < 8:
        raise GridTooSparse(f"reconstruction needs >= 8 voices per octave, grid has {vpo}")
    n = spec.times.size
    scales = spec.grid.scales
    w0 = spec.params.omega0

    # Convolve each scale row with its daughter psi0(tau/s): wrapped lags on
    # a length that prevents circular aliasing for supports up to n-1.
    ell = _padded_length(2 * n)
    lag = np.fft.fftfreq(ell, d=1.0 / ell)  # 0, 1, ..., -1 ordering
    eta = (lag[None, :] * spec.dt) / scales[:, None]
    kern = np.exp(1j * w0 * eta) * np.exp(-0.5 * eta * eta)
    conv = np.fft.ifft(np.fft.fft(spec.coeffs, n=ell, axis=1) * np.fft.fft(kern, axis=1), axis=1)[:, :n]

    c_psi = admissibility_constant(w0)
    const = 2.0 * math.log(2.0) * np.pi**0.25 * spec.dt**1.5 / (vpo * c_psi)
    values = const * np.real(scales**-1.5 @ conv)
    return TimeSeries(float(spec.times[0]), spec.dt, values, "reconstruction")
