"""Raster file formats: 8-bit binary PGM and float32 binary rasters.

The float raster is a little-endian stream: 4-byte magic ``FRAS``, two
int32 (width, height), then height*width float32 values in row-major
order.  NaN marks invalid pixels.
"""
from __future__ import annotations

import struct

import numpy as np

from ..errors import IoFailure

_MAGIC = b"FRAS"


def save_pgm(image: np.ndarray, path) -> None:
    """Write a [0, 1] intensity image as binary (P5) 8-bit PGM."""
    data = np.clip(np.asarray(image) * 255.0 + 0.5, 0, 255).astype(np.uint8)
    h, w = data.shape
    try:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode())
            fh.write(data.tobytes())
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def load_pgm(path) -> np.ndarray:
    """Read a binary (P5) 8-bit PGM into a [0, 1] float image."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    parts = blob.split(maxsplit=4)
    if parts[0] != b"P5" or parts[3] != b"255":
        raise IoFailure(f"unsupported PGM header in {path}")
    w, h = int(parts[1]), int(parts[2])
    pixels = np.frombuffer(parts[4][: w * h], dtype=np.uint8)
    if pixels.size != w * h:
        raise IoFailure(f"truncated PGM data in {path}")
    return pixels.reshape(h, w).astype(np.float64) / 255.0


def save_float_raster(data: np.ndarray, path, valid: np.ndarray | None = None) -> None:
    """Write a float map; invalid pixels (mask False) are stored as NaN."""
    arr = np.asarray(data, dtype=np.float32).copy()
    if valid is not None:
        arr[~valid] = np.nan
    h, w = arr.shape
    try:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<ii", w, h))
            fh.write(arr.astype("<f4").tobytes())
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def load_float_raster(path):
    """Read a float raster; returns (data float64, valid mask)."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    if blob[:4] != _MAGIC:
        raise IoFailure(f"bad magic in {path}")
    w, h = struct.unpack("<ii", blob[4:12])
    arr = np.frombuffer(blob[12:12 + 4 * w * h], dtype="<f4")
    if arr.size != w * h:
        raise IoFailure(f"truncated raster data in {path}")
    data = arr.reshape(h, w).astype(np.float64)
    valid = np.isfinite(data)
    data = np.where(valid, data, 0.0)
    return data, valid
