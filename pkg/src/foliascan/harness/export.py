"""Artifact export: CSV step logs, summary JSON, SVG error plots, rasters."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..errors import IoFailure
from .pipeline import RunReport, StepLog
from .rasters import save_float_raster

LOG_HEADER = ["t", "u", "v", "d", "e_u", "e_v", "e_d", "f_n", "V"]


def write_step_log(log: StepLog | None, path) -> None:
    """Write the per-step record CSV ``t,u,v,d,e_u,e_v,e_d,f_n,V``."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(LOG_HEADER)
            if log is None:
                return
            for k in range(len(log)):
                writer.writerow([repr(float(x)) for x in (
                    log.t[k], log.u[k], log.v[k], log.d[k],
                    log.e_u[k], log.e_v[k], log.e_d[k],
                    log.f_n[k], log.storage[k])])
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def read_step_log(path) -> dict:
    """Read a step-log CSV back into column arrays."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[float(x) for x in row] for row in reader]
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    data = np.asarray(rows) if rows else np.empty((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_summary(report: RunReport, path) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(report.as_dict(), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def read_summary(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoFailure(str(exc)) from exc


def _polyline(xs, ys, color: str, width: float = 1.0) -> str:
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    return (f'<polyline fill="none" stroke="{color}" '
            f'stroke-width="{width}" points="{pts}"/>')


def _scale(values, lo, hi, out_lo, out_hi):
    values = np.asarray(values, dtype=np.float64)
    span = hi - lo if hi > lo else 1.0
    return out_lo + (values - lo) / span * (out_hi - out_lo)


def write_error_plot(log: StepLog, path, width: int = 900, height: int = 480,
                     max_points: int = 2000) -> None:
    """SVG line plot of e_u, e_v, e_d, d over time with the sgn(d_des) overlay.

    One <polyline> per channel; the time axis is decimated to at most
    ``max_points`` samples.
    """
    n = len(log)
    step = max(1, n // max_points)
    sl = slice(0, n, step)
    t = log.t[sl]

    channels = [
        ("e_u", log.e_u[sl], "#1f77b4"),
        ("e_v", log.e_v[sl], "#2ca02c"),
        ("e_d", log.e_d[sl], "#d62728"),
        ("d", log.d[sl], "#9467bd"),
        ("sgn_d_des", log.sgn_d_des[sl], "#000000"),
    ]
    margin = 40.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    t_lo, t_hi = (float(t[0]), float(t[-1])) if len(t) else (0.0, 1.0)
    xs = _scale(t, t_lo, t_hi, margin, width - margin)
    for i, (name, ys_raw, color) in enumerate(channels):
        if len(ys_raw) == 0:
            parts.append(f'<polyline fill="none" stroke="{color}" points=""/>')
            continue
        lo, hi = float(np.min(ys_raw)), float(np.max(ys_raw))
        ys = _scale(ys_raw, lo, hi, height - margin, margin)
        parts.append(_polyline(xs, ys, color))
        parts.append(f'<text x="{margin + 80 * i}" y="20" fill="{color}" '
                     f'font-size="13">{name}</text>')
    parts.append("</svg>")
    try:
        Path(path).write_text("\n".join(parts) + "\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def write_map_csv(data: np.ndarray, valid: np.ndarray, path) -> None:
    """CSV export of a float map: rows ``y,x,value`` for valid pixels."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["y", "x", "value"])
            ys, xs = np.nonzero(valid)
            for y, x in zip(ys, xs):
                writer.writerow([y, x, repr(float(data[y, x]))])
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def export_artifacts(out_dir, report: RunReport, log: StepLog | None = None,
                     maps: dict | None = None) -> list[Path]:
    """Write all scenario artifacts into ``out_dir``; returns written paths.

    ``maps`` values are (data, valid) float-map pairs, written both as
    binary float rasters and CSV.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    written = []

    path = out / "summary.json"
    write_summary(report, path)
    written.append(path)

    if log is not None:
        path = out / "step_log.csv"
        write_step_log(log, path)
        written.append(path)
        path = out / "errors.svg"
        write_error_plot(log, path)
        written.append(path)

    for name, (data, valid) in (maps or {}).items():
        raster = out / f"{name}.fras"
        save_float_raster(data, raster, valid=valid)
        written.append(raster)
        csv_path = out / f"{name}.csv"
        write_map_csv(data, valid, csv_path)
        written.append(csv_path)
    return written
