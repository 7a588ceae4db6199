"""Closest-point queries on triangle meshes.

Vectorized point-to-triangle projection over all faces (the Ericson
region-classification scheme), returning the global minimizer.
"""
from __future__ import annotations

import numpy as np

from .mesh import TriangleMesh


def _project_all_faces(mesh: TriangleMesh, p: np.ndarray):
    """Barycentric coords and foot point of p projected on every face.

    Returns (bary (m,3), foot (m,3), dist2 (m,)).
    """
    v = mesh.vertices
    f = mesh.faces
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = np.einsum("ij,ij->i", ab, ap)
    d2 = np.einsum("ij,ij->i", ac, ap)
    bp = p - b
    d3 = np.einsum("ij,ij->i", ab, bp)
    d4 = np.einsum("ij,ij->i", ac, bp)
    cp = p - c
    d5 = np.einsum("ij,ij->i", ab, cp)
    d6 = np.einsum("ij,ij->i", ac, cp)
    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    with np.errstate(divide="ignore", invalid="ignore"):
        t_ab = np.where(d1 - d3 != 0, d1 / (d1 - d3), 0.0)
        t_ac = np.where(d2 - d6 != 0, d2 / (d2 - d6), 0.0)
        den_bc = (d4 - d3) + (d5 - d6)
        t_bc = np.where(den_bc != 0, (d4 - d3) / den_bc, 0.0)
        den = va + vb + vc
        v_in = np.where(den != 0, vb / den, 0.0)
        w_in = np.where(den != 0, vc / den, 0.0)

    cond_a = (d1 <= 0) & (d2 <= 0)
    cond_b = (d3 >= 0) & (d4 <= d3)
    cond_c = (d6 >= 0) & (d5 <= d6)
    cond_ab = (vc <= 0) & (d1 >= 0) & (d3 <= 0)
    cond_ac = (vb <= 0) & (d2 >= 0) & (d6 <= 0)
    cond_bc = (va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0)

    conds = [cond_a, cond_b, cond_c, cond_ab, cond_ac, cond_bc]
    l1 = np.select(conds, [1.0, 0.0, 0.0, 1.0 - t_ab, 1.0 - t_ac, 0.0 * t_bc],
                   default=1.0 - v_in - w_in)
    l2 = np.select(conds, [0.0, 1.0, 0.0, t_ab, 0.0 * t_ac, 1.0 - t_bc],
                   default=v_in)
    l3 = np.select(conds, [0.0, 0.0, 1.0, 0.0 * t_ab, t_ac, t_bc],
                   default=w_in)
    bary = np.stack([l1, l2, l3], axis=1)
    foot = bary[:, 0:1] * a + bary[:, 1:2] * b + bary[:, 2:3] * c
    diff = foot - p
    dist2 = np.einsum("ij,ij->i", diff, diff)
    return bary, foot, dist2


def closest_point(mesh: TriangleMesh, p) -> tuple[int, np.ndarray, np.ndarray, float]:
    """Closest point on the mesh surface to a 3D query point.

    Returns (face index, barycentric coords (3,), foot point (3,), distance).
    Total function: every finite query has an answer.
    """
    p = np.asarray(p, dtype=np.float64)
    bary, foot, dist2 = _project_all_faces(mesh, p)
    best = int(np.argmin(dist2))
    return best, bary[best], foot[best], float(np.sqrt(dist2[best]))
