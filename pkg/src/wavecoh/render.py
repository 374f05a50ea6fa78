"""Grid rendering to binary portable pixmaps (PGM/PPM).

Pixmaps keep golden-file tests byte-exact with zero codec dependencies;
converting to publication formats is the caller's concern. Conventions,
fixed here so outputs are reproducible:

- image row 0 shows the longest period (input grids are in ascending
  period order and get flipped),
- undefined (NaN) cells render mid-gray,
- the cone-of-influence region (period at or beyond the per-time limit)
  is darkened by 50 percent,
- a significance mask is drawn as a 1-pixel black boundary,
- "linear-heat" ramps black through red and yellow to white,
  "diverging-phase" runs blue through white to red with zero at the
  midpoint, "grayscale" is a plain single-channel ramp (PGM output).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRange

COLORMAPS = ("linear-heat", "diverging-phase", "grayscale")

_HEAT_ANCHORS = np.array(
    [(0, 0, 0), (128, 0, 0), (255, 0, 0), (255, 128, 0), (255, 255, 0), (255, 255, 255)],
    dtype=float,
)
_DIVERGING_ANCHORS = np.array([(0, 0, 255), (255, 255, 255), (255, 0, 0)], dtype=float)

_UNDEFINED_GRAY = 128


@dataclass(frozen=True)
class RenderSpec:
    """Rendering parameters; width/height of None means one pixel per cell."""

    colormap: str = "linear-heat"
    width: int | None = None
    height: int | None = None
    coi_shading: bool = True
    significance_contour: bool = True
    value_range: tuple[float, float] | None = None

    def __post_init__(self):
        if self.colormap not in COLORMAPS:
            raise ValueError(f"colormap must be one of {COLORMAPS}")
        for dim in (self.width, self.height):
            if dim is not None and dim < 1:
                raise ValueError("width and height must be positive")
        if self.value_range is not None and not (self.value_range[0] < self.value_range[1]):
            raise DegenerateRange(f"value_range {self.value_range} has no extent")


def _apply_anchors(norm: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    """Piecewise-linear interpolation through equally spaced color anchors."""
    pos = norm * (len(anchors) - 1)
    lo = np.clip(np.floor(pos).astype(int), 0, len(anchors) - 2)
    frac = (pos - lo)[..., None]
    return anchors[lo] * (1.0 - frac) + anchors[lo + 1] * frac


def _value_range(values: np.ndarray, render: RenderSpec) -> tuple[float, float]:
    if render.value_range is not None:
        return render.value_range
    if render.colormap == "diverging-phase":
        return (-np.pi, np.pi)
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        raise DegenerateRange("grid has no finite values and no explicit value_range")
    lo, hi = float(finite.min()), float(finite.max())
    if lo == hi:
        raise DegenerateRange(f"all finite values equal {lo:g}; pass an explicit value_range")
    return lo, hi


def _nearest_indices(n_out: int, n_in: int) -> np.ndarray:
    return (np.arange(n_out) * n_in) // n_out


def render_pixmap(
    grid: np.ndarray,
    render: RenderSpec,
    coi: np.ndarray | None = None,
    mask: np.ndarray | None = None,
    periods: np.ndarray | None = None,
) -> bytes:
    """Render a scale-major grid to PGM (grayscale) or PPM (color) bytes.

    `periods` gives the period of each grid row and is required for COI
    shading; `coi` is the per-time maximum trustworthy period.
    """
    values = np.asarray(grid, dtype=float)
    if values.ndim != 2 or values.size == 0:
        raise ValueError("grid must be a non-empty 2-D matrix")
    n_rows, n_cols = values.shape

    # Flip to paper orientation: longest period on top.
    values = values[::-1]
    mask_cells = None if mask is None else np.asarray(mask, dtype=bool)[::-1]
    row_periods = None if periods is None else np.asarray(periods, dtype=float)[::-1]

    lo, hi = _value_range(values, render)
    with np.errstate(invalid="ignore"):
        norm = np.clip((values - lo) / (hi - lo), 0.0, 1.0)
    undefined = ~np.isfinite(values)
    norm = np.where(undefined, 0.0, norm)

    if render.colormap == "grayscale":
        cells = (norm * 255.0)[..., None]
        channels = 1
    elif render.colormap == "linear-heat":
        cells = _apply_anchors(norm, _HEAT_ANCHORS)
        channels = 3
    else:
        cells = _apply_anchors(norm, _DIVERGING_ANCHORS)
        channels = 3

    if render.coi_shading and coi is not None:
        if row_periods is None:
            raise ValueError("COI shading requires the period of each grid row")
        shaded = row_periods[:, None] >= np.asarray(coi, dtype=float)[None, :]
        cells = np.where((shaded & ~undefined)[..., None], cells * 0.5, cells)

    cells = np.where(undefined[..., None], float(_UNDEFINED_GRAY), cells)

    height = render.height if render.height is not None else n_rows
    width = render.width if render.width is not None else n_cols
    rows = _nearest_indices(height, n_rows)
    cols = _nearest_indices(width, n_cols)
    pixels = cells[rows][:, cols]

    if render.significance_contour and mask_cells is not None:
        pm = mask_cells[rows][:, cols]
        inner = np.zeros_like(pm)
        inner[1:-1, 1:-1] = pm[1:-1, 1:-1] & pm[:-2, 1:-1] & pm[2:, 1:-1] & pm[1:-1, :-2] & pm[1:-1, 2:]
        boundary = pm & ~inner
        pixels = np.where(boundary[..., None], 0.0, pixels)

    data = np.clip(np.rint(pixels), 0, 255).astype(np.uint8)
    magic = b"P5" if channels == 1 else b"P6"
    header = magic + f"\n{width} {height}\n255\n".encode("ascii")
    return header + data.tobytes()
