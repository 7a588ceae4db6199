"""Epipolar code matching to disparity, and disparity/depth conversion.

On binary codewords, maximizing windowed cross-correlation of the bit
planes is equivalent to minimizing the summed per-bit Hamming cost; the
search scans integer disparities along the (horizontal) epipolar lines and
refines with a 3-point parabolic fit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from ..errors import EmptyOverlap
from .decode import CodeImage
from .scenes import StereoRig

_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)

DEFAULT_WINDOW = 3
# Fraction of code bits a window may mismatch on average before the pixel
# is rejected.  Gray codes displaced by a power-of-two shift disagree in
# only 2 bits, so the ceiling must sit below 2/n_bits to reject pixels
# that have no true correspondence.
DEFAULT_MISMATCH_CEILING = 0.1


@dataclass(frozen=True)
class DisparityMap:
    """Per-pixel subpixel disparity (pixels, >= 0) with validity mask."""

    disp: np.ndarray
    valid: np.ndarray


def _hamming(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    x = a ^ b
    out = _POPCOUNT[x & 0xFFFF].astype(np.float64)
    x >>= 16
    while np.any(x):
        out += _POPCOUNT[x & 0xFFFF]
        x >>= 16
    return out


def _box_sum(img: np.ndarray, window: int) -> np.ndarray:
    return uniform_filter(img, size=window, mode="constant") * window * window


def match_disparity(left: CodeImage, right: CodeImage, window: int = DEFAULT_WINDOW,
                    d_max: int | None = None,
                    mismatch_ceiling: float = DEFAULT_MISMATCH_CEILING,
                    subpixel: bool = True) -> DisparityMap:
    """Disparity by windowed Hamming matching of left/right codewords.

    For each valid left pixel the integer disparity in [0, d_max] with the
    lowest mean per-pair Hamming cost wins (ties take the smallest
    disparity).  Pixels are invalidated when the window has no valid
    left/right pair or the best mean cost exceeds
    ``mismatch_ceiling * n_bits``.
    """
    if left.codes.shape != right.codes.shape:
        raise ValueError("left/right images must have equal size")
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be odd and >= 1")
    h, w = left.codes.shape
    if d_max is None:
        d_max = w // 4
    d_max = int(min(d_max, w - 1))

    best_cost = np.full((h, w), np.inf)
    best_d = np.zeros((h, w), dtype=np.int64)
    cost_at = np.full((d_max + 1, h, w), np.inf)

    lc = left.codes
    lv = left.valid
    for d in range(d_max + 1):
        ham = np.zeros((h, w))
        pair = np.zeros((h, w))
        if d < w:
            rc = right.codes[:, : w - d]
            rv = right.valid[:, : w - d]
            both = lv[:, d:] & rv
            ham[:, d:] = _hamming(lc[:, d:], rc) * both
            pair[:, d:] = both
        sum_ham = _box_sum(ham, window)
        n_pair = _box_sum(pair, window)
        with np.errstate(invalid="ignore", divide="ignore"):
            mean_cost = np.where(n_pair > 0.5, sum_ham / np.maximum(n_pair, 1e-12), np.inf)
        cost_at[d] = mean_cost
        better = mean_cost < best_cost  # strict: ties keep the smaller d
        best_cost[better] = mean_cost[better]
        best_d[better] = d

    valid = lv & np.isfinite(best_cost) & (best_cost <= mismatch_ceiling * left.n_bits)
    disp = best_d.astype(np.float64)

    if subpixel:
        interior = valid & (best_d > 0) & (best_d < d_max)
        ys, xs = np.nonzero(interior)
        d0 = best_d[interior]
        c0 = cost_at[d0, ys, xs]
        cm = cost_at[d0 - 1, ys, xs]
        cp = cost_at[d0 + 1, ys, xs]
        denom = cm - 2 * c0 + cp
        ok = np.isfinite(cm) & np.isfinite(cp) & (denom > 1e-12)
        offset = np.zeros_like(c0)
        offset[ok] = 0.5 * (cm[ok] - cp[ok]) / denom[ok]
        disp[ys, xs] = d0 + np.clip(offset, -0.5, 0.5)

    disp[~valid] = 0.0
    return DisparityMap(disp=disp, valid=valid)


def disparity_to_depth(dmap: DisparityMap, rig: StereoRig):
    """Depth Z = f * B / disparity; zero disparity becomes invalid.

    Returns (depth map (m), valid mask).
    """
    valid = dmap.valid & (dmap.disp > 0)
    depth = np.zeros_like(dmap.disp)
    depth[valid] = rig.f * rig.baseline / dmap.disp[valid]
    return depth, valid


def disparity_mae(estimate: DisparityMap, truth: DisparityMap):
    """Mean absolute disparity error over commonly valid pixels.

    Returns (mae in pixels, fraction of pixels valid in both maps).

    Raises:
        EmptyOverlap: no commonly-valid pixel.
    """
    if estimate.disp.shape != truth.disp.shape:
        raise ValueError("maps must have equal size")
    both = estimate.valid & truth.valid
    if not np.any(both):
        raise EmptyOverlap("no commonly-valid pixels")
    mae = float(np.mean(np.abs(estimate.disp[both] - truth.disp[both])))
    return mae, float(both.mean())
