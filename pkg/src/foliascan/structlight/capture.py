"""Geometric simulation of structured-light stereo capture.

The projector is optically collocated with the left camera, so the left
view of the pattern equals the emitted pattern.  The right view is built
by forward-warping every left pixel to x_r = round(x_l - disparity) with a
z-buffer: of the left pixels landing on the same right pixel only the
nearest survives, and right pixels receiving no projection (occluded or
out of frame) are marked invalid.
"""
from __future__ import annotations

import numpy as np

from .patterns import ImageStack
from .scenes import DepthScene, StereoRig


def simulate_capture(scene: DepthScene, rig: StereoRig, patterns: ImageStack):
    """Render left/right pattern stacks for a scene.

    Returns (left stack, right stack, ground-truth left disparity map).
    """
    if patterns.shape[1] != rig.width:
        raise ValueError("pattern width must match the rig image width")
    depth = scene.depth_map(rig)
    disp_gt = rig.disparity_of_depth(depth)

    h, w = depth.shape
    planes = np.broadcast_to(patterns.bit_planes, (patterns.n_bits, h, w))
    left = ImageStack(
        bit_planes=np.ascontiguousarray(planes),
        white_ref=np.ones((h, w)),
        black_ref=np.zeros((h, w)),
        valid=np.ones((h, w), dtype=bool),
    )

    # Forward warp with z-buffer.
    ys, xs = np.mgrid[0:h, 0:w]
    xr = np.rint(xs - disp_gt).astype(np.int64)
    ok = (xr >= 0) & (xr < w)
    lin = (ys * w + xr)[ok]
    z_src = depth[ok]
    zbuf = np.full(h * w, np.inf)
    np.minimum.at(zbuf, lin, z_src)
    winner = z_src <= zbuf[lin]  # nearest surface claims the right pixel

    src_y = ys[ok][winner]
    src_x = xs[ok][winner]
    dst = lin[winner]

    r_planes = np.zeros((patterns.n_bits, h, w))
    flatp = r_planes.reshape(patterns.n_bits, -1)
    flatp[:, dst] = planes[:, src_y, src_x]
    r_valid = np.zeros(h * w, dtype=bool)
    r_valid[dst] = True
    r_white = np.zeros(h * w)
    r_white[dst] = 1.0

    right = ImageStack(
        bit_planes=r_planes,
        white_ref=r_white.reshape(h, w),
        black_ref=np.zeros((h, w)),
        valid=r_valid.reshape(h, w),
    )
    return left, right, disp_gt
