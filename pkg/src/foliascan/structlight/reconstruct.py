"""Back-projection of a depth map into a triangle mesh patch."""
from __future__ import annotations

import numpy as np

from ..errors import TooFewPoints
from ..meshgeom import TriangleMesh, build_mesh
from .scenes import StereoRig

DEFAULT_DISCONTINUITY = 0.05  # m; depth jump above this breaks a cell


def _fill_isolated(z: np.ndarray, ok: np.ndarray) -> None:
    """Median-fill invalid grid samples whose 8-neighborhood is mostly valid.

    In-place; repairs isolated decoder dropouts in the sampled depth grid
    so a single bad pixel does not punch a hole into the mesh.
    """
    ys, xs = np.nonzero(~ok)
    for y, x in zip(ys, xs):
        ny0, ny1 = max(y - 1, 0), min(y + 2, z.shape[0])
        nx0, nx1 = max(x - 1, 0), min(x + 2, z.shape[1])
        patch_ok = ok[ny0:ny1, nx0:nx1]
        n_neighbors = patch_ok.size - 1
        if n_neighbors >= 3 and patch_ok.sum() >= n_neighbors:
            z[y, x] = np.median(z[ny0:ny1, nx0:nx1][patch_ok])
            ok[y, x] = True


def depth_to_mesh(depth: np.ndarray, valid: np.ndarray, rig: StereoRig,
                  stride: int = 1,
                  discontinuity: float = DEFAULT_DISCONTINUITY,
                  fill_isolated: bool = True,
                  origin: tuple[int, int] = (0, 0)) -> TriangleMesh:
    """Triangulate a depth map into a mesh in left-camera coordinates.

    Samples the pixel grid every ``stride`` pixels, back-projects valid
    samples through the pinhole model and emits two triangles per grid cell
    whose four corners are valid and jump-free.  Orientation is chosen so
    normals point toward the camera (outward from the scene surface).
    Isolated invalid samples are median-filled from their neighbors unless
    ``fill_isolated`` is disabled.  For a cropped depth map, ``origin``
    gives the (x, y) full-image pixel position of the crop's top-left
    corner so back-projection uses true pixel coordinates.

    Raises:
        TooFewPoints: fewer than a 2x2 block of usable samples.
    """
    ys = np.arange(0, depth.shape[0], stride)
    xs = np.arange(0, depth.shape[1], stride)
    gy, gx = np.meshgrid(ys, xs, indexing="ij")
    z = depth[gy, gx].copy()
    ok = valid[gy, gx].copy()
    ny, nx = z.shape
    if ny < 2 or nx < 2:
        raise TooFewPoints("need at least a 2x2 sample grid")
    if fill_isolated:
        _fill_isolated(z, ok)

    pts = rig.back_project(gx + origin[0], gy + origin[1], z)

    z00 = z[:-1, :-1]
    z10 = z[:-1, 1:]
    z01 = z[1:, :-1]
    z11 = z[1:, 1:]
    cell_ok = ok[:-1, :-1] & ok[:-1, 1:] & ok[1:, :-1] & ok[1:, 1:]
    jump = np.maximum.reduce([
        np.abs(z00 - z10), np.abs(z00 - z01),
        np.abs(z11 - z10), np.abs(z11 - z01),
    ])
    cell_ok &= jump <= discontinuity
    if not np.any(cell_ok):
        raise TooFewPoints("no usable grid cell")

    idx = np.arange(ny * nx).reshape(ny, nx)
    cy, cx = np.nonzero(cell_ok)
    v00 = idx[cy, cx]
    v10 = idx[cy, cx + 1]
    v01 = idx[cy + 1, cx]
    v11 = idx[cy + 1, cx + 1]
    # CCW seen from the camera side (-z): image x right, y down.
    faces = np.concatenate([
        np.stack([v00, v11, v10], axis=1),
        np.stack([v00, v01, v11], axis=1),
    ])

    used = np.unique(faces)
    remap = np.full(ny * nx, -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return build_mesh(pts.reshape(-1, 3)[used], remap[faces])
