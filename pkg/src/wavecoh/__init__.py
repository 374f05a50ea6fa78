"""Time-frequency coherence toolkit.

Morlet continuous wavelet transform, wavelet coherence with Monte Carlo
significance, and least-squares harmonic band extraction for uniformly
sampled (typically annual) series, plus loaders for the two public
millennial datasets the pipeline was built around.
"""

__version__ = "0.1.0"

from .coherence import (
    CoherenceResult,
    CrossSpectrum,
    SmoothingSpec,
    coherence,
    cross_spectrum,
    phase,
    scale_smoothing_window,
    smooth,
)
from .cwt import (
    DEFAULT_PARAMS,
    MorletParams,
    ScaleGrid,
    WaveletSpectrum,
    admissibility_constant,
    coi,
    cwt,
    default_grid,
    log_scale_grid,
    morlet_freq,
    morlet_time,
    period_to_scale,
    power,
    reconstruct,
    scale_to_period,
)
from .ingest import DatasetDescriptor, load_amo, load_generic, load_tsi
from .pfa import (
    BandSpec,
    PfaModel,
    band_component,
    band_correlation,
    band_periods,
    evaluate_pfa,
    fit_pfa,
)
from .render import RenderSpec, render_pixmap
from .series import (
    OverlapPair,
    TimeSeries,
    detrend_linear,
    mean_epoch,
    new_series,
    overlap,
    standardize,
)
from .significance import (
    McConfig,
    SignificanceResult,
    mc_thresholds,
    mix64,
    phase_randomize,
    significance_mask,
)

__all__ = [name for name in dir() if not name.startswith("_")]
