"""Planar disk parametrization of a mesh patch.

Boundary vertices are spread over the unit circle by cumulative boundary arc
length; interior vertices are placed by a convex-combination map with mean
value weights.  Positive weights plus a convex boundary make the embedding
bijective, so valid inputs produce zero flipped faces.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import IoFailure, SolverFailure
from .mesh import TriangleMesh


@dataclass(frozen=True)
class DiskParam:
    """Per-vertex (u, v) coordinates in the closed unit disk.

    Attributes:
        uv: (n, 2) dimensionless coordinates; boundary exactly on the
            unit circle, interior strictly inside.
        boundary_loop: ordered boundary vertex indices.
    """

    uv: np.ndarray
    boundary_loop: np.ndarray


def signed_areas_2d(uv: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Signed area of each face in the 2D parameter domain."""
    a, b, c = uv[faces[:, 0]], uv[faces[:, 1]], uv[faces[:, 2]]
    return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                  - (c[:, 0] - a[:, 0]) * (b[:, 1] - a[:, 1]))


def _mean_value_weights(mesh: TriangleMesh):
    """Symmetric-sparse assembly of per-directed-edge mean value weights.

    w_ij = (tan(theta1/2) + tan(theta2/2)) / |e_ij| with theta1, theta2 the
    angles at vertex i between edge (i, j) and the adjacent face edges.
    """
    v = mesh.vertices
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for tri in mesh.faces:
        for corner in range(3):
            i = int(tri[corner])
            j = int(tri[(corner + 1) % 3])
            k = int(tri[(corner + 2) % 3])
            # angle at i between edges (i,j) and (i,k); contributes
            # tan(angle/2) to both w_ij and w_ik.
            e1 = v[j] - v[i]
            e2 = v[k] - v[i]
            n1 = np.linalg.norm(e1)
            n2 = np.linalg.norm(e2)
            cosang = np.clip(np.dot(e1, e2) / (n1 * n2), -1.0, 1.0)
            t_half = np.tan(0.5 * np.arccos(cosang))
            rows.extend((i, i))
            cols.extend((j, k))
            vals.extend((t_half / n1, t_half / n2))
    n = mesh.n_vertices
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def parametrize_disk(mesh: TriangleMesh) -> DiskParam:
    """Map a disk-topology mesh patch to the closed unit disk.

    Raises:
        SolverFailure: singular interior system or a flipped 2D face.
    """
    loop = mesh.boundary_loop
    v = mesh.vertices
    n = mesh.n_vertices

    # Boundary to unit circle by cumulative arc length.
    pts = v[loop]
    seg = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    total = seg.sum()
    theta = 2.0 * np.pi * np.concatenate(([0.0], np.cumsum(seg[:-1]))) / total
    uv = np.zeros((n, 2))
    uv[loop, 0] = np.cos(theta)
    uv[loop, 1] = np.sin(theta)

    interior = np.setdiff1d(np.arange(n), loop)
    if len(interior):
        w = _mean_value_weights(mesh)
        row_sum = np.asarray(w.sum(axis=1)).ravel()
        if np.any(row_sum[interior] <= 0):
            raise SolverFailure("non-positive weight row sum at an interior vertex")
        lam = sp.diags(1.0 / row_sum) @ w  # convex combination weights
        a_ii = sp.eye(n, format="csr") - lam
        a_sub = a_ii[interior][:, interior].tocsc()
        rhs = lam[interior][:, loop] @ uv[loop]
        try:
            sol = spla.spsolve(a_sub, rhs)
        except Exception as exc:  # singular factorization
            raise SolverFailure(str(exc)) from exc
        if not np.all(np.isfinite(sol)):
            raise SolverFailure("interior solve produced non-finite coordinates")
        uv[interior] = sol.reshape(len(interior), 2)

    # Orientation: outward-CCW meshes may map either way depending on the
    # boundary traversal direction; a reflection keeps the circle boundary.
    areas = signed_areas_2d(uv, mesh.faces)
    if areas.sum() < 0:
        uv[:, 1] = -uv[:, 1]
        areas = -areas
    if np.any(areas <= 0):
        raise SolverFailure("parametrization produced flipped faces")

    uv.setflags(write=False)
    return DiskParam(uv=uv, boundary_loop=loop)


def save_param_csv(param: DiskParam, path) -> None:
    """Export per-vertex coordinates as CSV ``vertex_id,u,v``."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["vertex_id", "u", "v"])
            for i, (u, vv) in enumerate(param.uv):
                writer.writerow([i, repr(float(u)), repr(float(vv))])
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
