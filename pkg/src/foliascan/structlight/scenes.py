"""Analytic depth scenes and the rectified stereo rig model.

Scenes provide a ground-truth left-camera depth map along pixel rays of a
pinhole camera; the rig converts between depth and disparity for a
rectified horizontal-epipolar stereo pair.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidScene


@dataclass(frozen=True)
class StereoRig:
    """Rectified pinhole stereo rig with horizontal epipolar lines."""

    width: int
    height: int
    f: float          # focal length, pixels
    cx: float
    cy: float
    baseline: float   # meters

    def __post_init__(self):
        if self.f <= 0 or self.baseline <= 0:
            raise InvalidScene("focal length and baseline must be positive")
        if self.width < 8 or self.height < 8:
            raise InvalidScene("image size must be at least 8x8")

    def pixel_rays(self):
        """Per-pixel ray directions (h, w, 3) with unit z component."""
        xs = (np.arange(self.width) - self.cx) / self.f
        ys = (np.arange(self.height) - self.cy) / self.f
        gx, gy = np.meshgrid(xs, ys)
        return np.stack([gx, gy, np.ones_like(gx)], axis=2)

    def disparity_of_depth(self, z):
        return self.f * self.baseline / z

    def back_project(self, px, py, z):
        """Left-camera 3D point of pixel (px, py) at depth z."""
        x = (px - self.cx) / self.f * z
        y = (py - self.cy) / self.f * z
        return np.stack(np.broadcast_arrays(x, y, z), axis=-1)


def _ray_sphere_depth(rays: np.ndarray, center, radius: float) -> np.ndarray:
    """Depth (z of first intersection) of rays p = t*dir against a sphere.

    Returns NaN where the ray misses the sphere.
    """
    c = np.asarray(center, dtype=np.float64)
    a = np.einsum("hwc,hwc->hw", rays, rays)
    b = -2.0 * np.einsum("hwc,c->hw", rays, c)
    cc = float(c @ c) - radius**2
    disc = b * b - 4 * a * cc
    t = np.full(rays.shape[:2], np.nan)
    hit = disc >= 0
    sq = np.sqrt(np.where(hit, disc, 0.0))
    t1 = (-b - sq) / (2 * a)
    t2 = (-b + sq) / (2 * a)
    tt = np.where(t1 > 0, t1, t2)
    good = hit & (tt > 0)
    t[good] = tt[good]
    return t


@dataclass(frozen=True)
class DepthScene:
    """Analytic scene descriptor: fronto-parallel plane, optionally with
    one or two spheres in front of it.

    kind: "plane" | "sphere" | "two_sphere".
    """

    kind: str
    plane_z: float = 1.5
    centers: tuple = field(default=())   # sphere centers, meters
    radii: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("plane", "sphere", "two_sphere"):
            raise InvalidScene(f"unknown scene kind {self.kind!r}")
        if self.plane_z <= 0:
            raise InvalidScene("plane depth must be positive")
        want = {"plane": 0, "sphere": 1, "two_sphere": 2}[self.kind]
        if len(self.centers) != want or len(self.radii) != want:
            raise InvalidScene(f"{self.kind} scene needs {want} sphere(s)")
        if any(r <= 0 for r in self.radii):
            raise InvalidScene("sphere radii must be positive")

    def depth_map(self, rig: StereoRig) -> np.ndarray:
        """Ground-truth left-camera depth (z coordinate), (h, w)."""
        rays = rig.pixel_rays()
        z = np.full((rig.height, rig.width), self.plane_z)
        for center, radius in zip(self.centers, self.radii):
            zs = _ray_sphere_depth(rays, center, radius)
            closer = np.isfinite(zs) & (zs < z)
            z[closer] = zs[closer]
        if np.any(z <= 0):
            raise InvalidScene("scene produced non-positive depth")
        return z
