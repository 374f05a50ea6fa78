"""Batch command-line front end.

Three subcommands run the pipelines end to end and emit CSV grids, a JSON
metadata sidecar, and rendered pixmaps:

    wavecoh cwt        scalogram of one series
    wavecoh coherence  squared coherency, phase, Monte Carlo significance
    wavecoh pfa        harmonic band extraction and band correlation

Exit codes: 0 success, 2 argument errors, 3 ingestion errors, 4 numeric
errors, 5 alignment (overlap) failures.

CSV grid layout: the first row is the time axis (corner cell "period"),
the first column is the period axis in years ascending, cell (j, i) the
value. Images flip to the paper orientation (longest period on top); CSVs
do not. The meta.json sidecar echoes every flag and checksums every input
so a run can be reproduced exactly. All files are written atomically
(temp file + rename).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .coherence import SmoothingSpec, coherence
from .cwt import MorletParams, cwt, log_scale_grid, power
from .errors import AlignmentError, IngestError, WavecohError
from .ingest import DatasetDescriptor, load_generic
from .pfa import BandSpec, band_component, band_correlation, band_periods, fit_pfa
from .render import RenderSpec, render_pixmap
from .series import TimeSeries, detrend_linear, overlap, standardize
from .significance import McConfig, SignificanceResult, mc_thresholds, significance_mask

FORMATS = ("tsi", "amo", "generic")

_KIND = {"tsi": "tsi-lisird", "amo": "amo-ncei", "generic": "generic-two-column"}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_atomic(path: str, data: bytes):
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _write_text(path: str, text: str):
    _write_atomic(path, text.encode("utf-8"))


def _write_grid_csv(path: str, periods: np.ndarray, times: np.ndarray, grid: np.ndarray, cell=_fmt):
    lines = ["period," + ",".join(_fmt(t) for t in times)]
    for p, row in zip(periods, grid):
        lines.append(_fmt(p) + "," + ",".join(cell(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def _write_series_csv(path: str, series: TimeSeries, value_name: str = "value"):
    lines = [f"epoch,{value_name}"]
    for t, v in zip(series.times, series.values):
        lines.append(f"{_fmt(t)},{_fmt(v)}")
    _write_text(path, "\n".join(lines) + "\n")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _series_meta(path: str, series: TimeSeries) -> dict:
    return {
        "path": path,
        "sha256": _sha256(path),
        "label": series.label,
        "t0": series.t0,
        "dt": series.dt,
        "n_samples": series.n,
        "last_epoch": series.t_end,
    }


def _write_meta(prefix: str, command: str, args: argparse.Namespace, inputs: dict, extra: dict):
    flags = {k: v for k, v in vars(args).items() if k != "func"}
    meta = {
        "command": command,
        "version": __version__,
        "flags": flags,
        "inputs": inputs,
        **extra,
    }
    _write_text(f"{prefix}.meta.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")


def _load(path: str, fmt: str, column_time: int, column_value: int) -> TimeSeries:
    desc = DatasetDescriptor(
        source_kind=_KIND[fmt], path=path, column_time=column_time, column_value=column_value
    )
    return load_generic(desc)


def _grid_for(args, parser: argparse.ArgumentParser, dt: float):
    params = MorletParams.from_omega0(args.omega0)
    s0 = args.s0 if args.s0 is not None else 2.0 * dt
    if s0 < 2.0 * dt * (1.0 - 1e-12):
        parser.error(
            f"ScaleBelowNyquist: --s0 {s0:g} is below the Nyquist guard 2*dt = {2 * dt:g}"
        )
    return log_scale_grid(s0, args.voices, args.octaves, params), params


def _render_size(shape) -> dict:
    return {"height": max(shape[0], 16), "width": max(shape[1], 16)}


def _add_grid_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--s0", type=float, default=None, help="smallest scale in years (default 2*dt)")
    sub.add_argument("--voices", type=int, default=12, help="voices per octave (default 12)")
    sub.add_argument("--octaves", type=int, default=8, help="octaves above s0 (default 8)")
    sub.add_argument("--omega0", type=float, default=6.0, help="Morlet center frequency (default 6)")


def cmd_cwt(args, parser) -> int:
    series = _load(args.input, args.format, args.column_time, args.column_value)
    input_meta = _series_meta(args.input, series)
    if args.detrend:
        series = detrend_linear(series)
    if args.standardize:
        series = standardize(series)
    grid, params = _grid_for(args, parser, series.dt)

    spec = cwt(series, grid, params)
    pw = power(spec)
    prefix = args.out_prefix
    _write_grid_csv(f"{prefix}.power.csv", spec.periods, spec.times, pw)
    _write_series_csv(
        f"{prefix}.coi.csv", TimeSeries(series.t0, series.dt, spec.coi, "coi"), "coi_period"
    )
    render = RenderSpec(colormap="grayscale", coi_shading=True, **_render_size(pw.shape))
    _write_atomic(
        f"{prefix}.power.pgm", render_pixmap(pw, render, coi=spec.coi, periods=spec.periods)
    )
    _write_meta(
        prefix,
        "cwt",
        args,
        {"input": input_meta},
        {"num_scales": grid.num_scales, "scale_range": [grid.scales[0], grid.scales[-1]]},
    )
    return 0


def cmd_coherence(args, parser) -> int:
    x = _load(args.input_x, args.format_x, args.column_time, args.column_value)
    y = _load(args.input_y, args.format_y, args.column_time, args.column_value)
    inputs = {"x": _series_meta(args.input_x, x), "y": _series_meta(args.input_y, y)}
    pair = overlap(x, y)
    x, y = standardize(pair.a), standardize(pair.b)
    grid, params = _grid_for(args, parser, x.dt)
    smoothing = SmoothingSpec.default_for(grid)
    cfg = McConfig(n_surrogates=args.surrogates, alpha=args.alpha, seed=args.seed)

    result = coherence(cwt(x, grid, params), cwt(y, grid, params), smoothing)
    thresholds = mc_thresholds(x, y, grid, params, smoothing, cfg, workers=args.workers)
    mask = significance_mask(result, thresholds)
    sig = SignificanceResult(threshold=thresholds, mask=mask)

    prefix = args.out_prefix
    periods, times = result.periods, result.times
    _write_grid_csv(f"{prefix}.r2.csv", periods, times, result.r2)
    _write_grid_csv(f"{prefix}.phase.csv", periods, times, result.phase)
    _write_grid_csv(f"{prefix}.mask.csv", periods, times, mask, cell=lambda v: str(int(v)))
    lines = ["scale,period,threshold"]
    for s, p, t in zip(grid.scales, periods, sig.threshold):
        lines.append(f"{_fmt(s)},{_fmt(p)},{_fmt(t)}")
    _write_text(f"{prefix}.thresholds.csv", "\n".join(lines) + "\n")
    render = RenderSpec(colormap="linear-heat", value_range=(0.0, 1.0), **_render_size(result.r2.shape))
    _write_atomic(
        f"{prefix}.r2.ppm",
        render_pixmap(result.r2, render, coi=result.coi, mask=mask, periods=periods),
    )
    _write_meta(
        prefix,
        "coherence",
        args,
        inputs,
        {
            "overlap": {"t0": x.t0, "n_samples": x.n, "last_epoch": x.t_end},
            "num_scales": grid.num_scales,
            "smoothing": {
                "time_kernel": smoothing.time_kernel,
                "scale_window": smoothing.scale_window,
                "efolding_truncate": smoothing.efolding_truncate,
            },
        },
    )
    return 0


def _parse_band(text: str) -> tuple[int, int]:
    try:
        m1, m2 = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must be M1:M2, got {text!r}")
    return m1, m2


def cmd_pfa(args, parser) -> int:
    x = _load(args.input_x, args.format_x, args.column_time, args.column_value)
    y = _load(args.input_y, args.format_y, args.column_time, args.column_value)
    inputs = {"x": _series_meta(args.input_x, x), "y": _series_meta(args.input_y, y)}
    for m1, m2 in args.band:
        if m1 < 1 or m2 < m1:
            parser.error(f"--band {m1}:{m2} is invalid: need 1 <= M1 <= M2")

    pair = overlap(x, y)
    x, y = pair.a, pair.b
    p0 = args.p0 if args.p0 is not None else x.span
    if p0 <= 0:
        parser.error(f"--p0 must be positive, got {p0:g}")
    model_x = fit_pfa(x, p0=p0, n=args.harmonics)
    model_y = fit_pfa(y, p0=p0, n=args.harmonics)
    for m1, m2 in args.band:
        if m2 > model_x.n:
            parser.error(f"--band {m1}:{m2} exceeds the fitted harmonic count n={model_x.n}")

    prefix = args.out_prefix
    records = []
    for m1, m2 in args.band:
        band = BandSpec(m1, m2)
        bx = band_component(model_x, band, x.times)
        by = band_component(model_y, band, y.times)
        lines = ["epoch,x,y"]
        for t, vx, vy in zip(x.times, bx, by):
            lines.append(f"{_fmt(t)},{_fmt(vx)},{_fmt(vy)}")
        _write_text(f"{prefix}.band-{m1}-{m2}.csv", "\n".join(lines) + "\n")
        lo, hi = band_periods(model_x, band)
        sl = slice(m1 - 1, m2)
        records.append(
            {
                "m1": m1,
                "m2": m2,
                "period_lo": lo,
                "period_hi": hi,
                "pearson_r": band_correlation(bx, by),
                "x_sigma": model_x.sigma[sl].tolist(),
                "y_sigma": model_y.sigma[sl].tolist(),
            }
        )
    _write_text(
        f"{prefix}.bands.json", json.dumps({"p0": p0, "bands": records}, indent=2) + "\n"
    )
    _write_meta(
        prefix,
        "pfa",
        args,
        inputs,
        {"p0": p0, "harmonics": model_x.n, "overlap": {"t0": x.t0, "n_samples": x.n}},
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavecoh",
        description="Time-frequency analysis: Morlet CWT, wavelet coherence, harmonic bands.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cwt = sub.add_parser("cwt", help="scalogram of one series")
    p_cwt.add_argument("--input", required=True)
    p_cwt.add_argument("--format", choices=FORMATS, required=True)
    p_cwt.add_argument("--detrend", action="store_true")
    p_cwt.add_argument("--standardize", action="store_true")
    p_cwt.set_defaults(func=cmd_cwt)

    p_coh = sub.add_parser("coherence", help="wavelet coherence with significance")
    for role in ("x", "y"):
        p_coh.add_argument(f"--input-{role}", required=True)
        p_coh.add_argument(f"--format-{role}", choices=FORMATS, required=True)
    p_coh.add_argument("--surrogates", type=int, default=300)
    p_coh.add_argument("--alpha", type=float, default=0.05)
    p_coh.add_argument("--seed", type=int, default=0)
    p_coh.add_argument("--workers", type=int, default=1)
    p_coh.set_defaults(func=cmd_coherence)

    p_pfa = sub.add_parser("pfa", help="harmonic band extraction and correlation")
    for role in ("x", "y"):
        p_pfa.add_argument(f"--input-{role}", required=True)
        p_pfa.add_argument(f"--format-{role}", choices=FORMATS, required=True)
    p_pfa.add_argument("--p0", type=float, default=None, help="base period (default: overlap span)")
    p_pfa.add_argument("--harmonics", type=int, default=None)
    p_pfa.add_argument("--band", type=_parse_band, action="append", required=True, metavar="M1:M2")
    p_pfa.set_defaults(func=cmd_pfa)

    _add_grid_flags(p_cwt)
    _add_grid_flags(p_coh)
    for p in (p_cwt, p_coh, p_pfa):
        p.add_argument("--column-time", type=int, default=0)
        p.add_argument("--column-value", type=int, default=1)
        p.add_argument("--out-prefix", required=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except IngestError as exc:
        print(f"wavecoh: ingestion error: {exc}", file=sys.stderr)
        return 3
    except AlignmentError as exc:
        print(f"wavecoh: alignment error: {exc}", file=sys.stderr)
        return 5
    except WavecohError as exc:
        print(f"wavecoh: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
