"""Synthetic surface patches used by scenarios, demos and self-tests."""
from __future__ import annotations

import numpy as np

from .meshgeom import TriangleMesh, build_mesh


def _grid_faces(nx: int, ny: int) -> np.ndarray:
    """CCW (seen from +z) triangulation of an (nx x ny)-vertex grid."""
    faces = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            v00 = j * nx + i
            v10 = v00 + 1
            v01 = v00 + nx
            v11 = v01 + 1
            faces.append((v00, v10, v11))
            faces.append((v00, v11, v01))
    return np.asarray(faces, dtype=np.int64)


def grid_mesh(nx: int = 3, ny: int = 3, size: float = 1.0, z: float = 0.0) -> TriangleMesh:
    """Flat grid patch in the z = const plane, normals +z."""
    xs = np.linspace(0.0, size, nx)
    ys = np.linspace(0.0, size, ny)
    gx, gy = np.meshgrid(xs, ys)
    verts = np.stack([gx.ravel(), gy.ravel(), np.full(nx * ny, z)], axis=1)
    return build_mesh(verts, _grid_faces(nx, ny))


def sphere_patch(radius: float = 0.1, half_width: float = 0.06, n: int = 9) -> TriangleMesh:
    """Spherical cap patch around the +z pole of a sphere centered at origin.

    Sampled on a square (x, y) grid with z = sqrt(R^2 - x^2 - y^2);
    requires half_width < radius / sqrt(2).
    """
    if half_width * np.sqrt(2.0) >= radius:
        raise ValueError("half_width too large for the sphere radius")
    xs = np.linspace(-half_width, half_width, n)
    gx, gy = np.meshgrid(xs, xs)
    gz = np.sqrt(radius**2 - gx**2 - gy**2)
    verts = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)
    return build_mesh(verts, _grid_faces(n, n))


def bumpy_patch(n: int = 11, size: float = 0.2, amplitude: float = 0.02) -> TriangleMesh:
    """Undulating patch for parametrization robustness tests."""
    xs = np.linspace(0.0, size, n)
    gx, gy = np.meshgrid(xs, xs)
    gz = amplitude * np.sin(2 * np.pi * gx / size) * np.cos(np.pi * gy / size)
    verts = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)
    return build_mesh(verts, _grid_faces(n, n))
