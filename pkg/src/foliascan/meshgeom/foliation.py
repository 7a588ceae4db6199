"""Foliation of space around a parametrized surface patch.

Couples a TriangleMesh with its DiskParam and maps between Cartesian points
and task coordinates (u, v, d): the barycentric surface lift S(u, v) plus a
signed offset d along the barycentrically interpolated (Phong) unit normal.
Each fixed d defines one leaf of the foliation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BeyondReach, NoConvergence, OutsideDomain
from .closest import closest_point
from .mesh import TriangleMesh
from .param import DiskParam

_INSIDE_TOL = 1e-9  # barycentric slack for point-in-triangle tests


@dataclass(frozen=True)
class TaskCoords:
    """Task coordinates: planar surface coordinates plus normal offset.

    u, v are dimensionless (unit disk); d is the signed offset distance in
    meters, positive on the outside of the tissue.
    """

    u: float
    v: float
    d: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.d])


@dataclass(frozen=True)
class SurfaceFrame:
    """Right-handed orthonormal frame attached to a surface point."""

    origin: np.ndarray
    n_hat: np.ndarray
    t_u: np.ndarray
    t_v: np.ndarray


class Foliation:
    """Bidirectional map between Cartesian space and (u, v, d) coordinates.

    Immutable after construction; all queries are pure functions, safe for
    concurrent callers.  ``reach`` bounds |d| so the offset map stays
    injective; the default is 0.5 / kappa_max with kappa_max the maximum
    discrete normal-variation curvature over mesh edges.
    """

    def __init__(self, mesh: TriangleMesh, param: DiskParam, reach: float | None = None):
        self.mesh = mesh
        self.param = param

        uv = param.uv
        f = mesh.faces
        self._uv3 = uv[f[:, 2]]                       # (m,2)
        e1 = uv[f[:, 0]] - self._uv3
        e2 = uv[f[:, 1]] - self._uv3
        det = e1[:, 0] * e2[:, 1] - e2[:, 0] * e1[:, 1]
        # inverse of [[e1, e2]] per face: [l1,l2] = Ainv @ (uv - uv3)
        self._ainv = np.empty((len(f), 2, 2))
        self._ainv[:, 0, 0] = e2[:, 1] / det
        self._ainv[:, 0, 1] = -e2[:, 0] / det
        self._ainv[:, 1, 0] = -e1[:, 1] / det
        self._ainv[:, 1, 1] = e1[:, 0] / det

        v3d = mesh.vertices
        n3d = mesh.normals
        self._v = v3d[f]                              # (m,3,3) corner positions
        self._n = n3d[f]                              # (m,3,3) corner normals
        # per-face derivatives of the lift w.r.t. (u, v)
        dv1 = self._v[:, 0] - self._v[:, 2]
        dv2 = self._v[:, 1] - self._v[:, 2]
        dn1 = self._n[:, 0] - self._n[:, 2]
        dn2 = self._n[:, 1] - self._n[:, 2]
        self._s_u = self._ainv[:, 0, 0, None] * dv1 + self._ainv[:, 1, 0, None] * dv2
        self._s_v = self._ainv[:, 0, 1, None] * dv1 + self._ainv[:, 1, 1, None] * dv2
        self._nraw_u = self._ainv[:, 0, 0, None] * dn1 + self._ainv[:, 1, 0, None] * dn2
        self._nraw_v = self._ainv[:, 0, 1, None] * dn1 + self._ainv[:, 1, 1, None] * dn2

        if reach is None:
            kappa = 0.0
            for corner in range(3):
                i = f[:, corner]
                j = f[:, (corner + 1) % 3]
                dn = np.linalg.norm(n3d[i] - n3d[j], axis=1)
                dv = np.linalg.norm(v3d[i] - v3d[j], axis=1)
                kappa = max(kappa, float(np.max(dn / dv)))
            reach = 0.5 / kappa if kappa > 1e-12 else np.inf
        self.reach = float(reach)

    # --- point location in the parameter domain ---

    def _bary_in_face(self, face: int, u: float, v: float) -> np.ndarray:
        du = u - self._uv3[face, 0]
        dv = v - self._uv3[face, 1]
        l1 = self._ainv[face, 0, 0] * du + self._ainv[face, 0, 1] * dv
        l2 = self._ainv[face, 1, 0] * du + self._ainv[face, 1, 1] * dv
        return np.array([l1, l2, 1.0 - l1 - l2])

    def locate(self, u: float, v: float, hint: int | None = None,
               clamp: bool = False) -> tuple[int, np.ndarray]:
        """Find the parameter-domain triangle containing (u, v).

        With ``clamp=True`` an outside query returns the face whose
        barycentric violation is smallest, coordinates clamped to it.
        Raises OutsideDomain otherwise.
        """
        if hint is not None:
            bary = self._bary_in_face(hint, u, v)
            if bary.min() >= -_INSIDE_TOL:
                return hint, np.clip(bary, 0.0, None)
        duv = np.array([u, v]) - self._uv3
        lam12 = np.einsum("mij,mj->mi", self._ainv, duv)
        bary_all = np.concatenate(
            [lam12, 1.0 - lam12.sum(axis=1, keepdims=True)], axis=1)
        worst = bary_all.min(axis=1)
        best = int(np.argmax(worst))
        if worst[best] >= -_INSIDE_TOL:
            return best, np.clip(bary_all[best], 0.0, None)
        if clamp:
            bary = np.clip(bary_all[best], 0.0, None)
            return best, bary / bary.sum()
        raise OutsideDomain(f"(u,v)=({u:.6g},{v:.6g}) outside parametrized domain")

    # --- forward maps ---

    def _lift(self, face: int, bary: np.ndarray):
        """Surface point and raw (unnormalized) Phong normal on a face."""
        s = bary @ self._v[face]
        n_raw = bary @ self._n[face]
        return s, n_raw

    def surface_frame(self, u: float, v: float, hint: int | None = None) -> SurfaceFrame:
        """Orthonormal frame at (u, v): Phong normal and leaf tangents.

        t_u follows the projection of dS/du onto the tangent plane;
        t_v = n_hat x t_u closes a right-handed triad.
        """
        face, bary = self.locate(u, v, hint=hint)
        s, n_raw = self._lift(face, bary)
        n_hat = n_raw / np.linalg.norm(n_raw)
        su = self._s_u[face]
        tu = su - np.dot(su, n_hat) * n_hat
        tu /= np.linalg.norm(tu)
        tv = np.cross(n_hat, tu)
        return SurfaceFrame(origin=s, n_hat=n_hat, t_u=tu, t_v=tv)

    def embed(self, x: TaskCoords, hint: int | None = None) -> np.ndarray:
        """Cartesian point S(u,v) + d * n_hat(u,v) on leaf d."""
        if abs(x.d) >= self.reach:
            raise BeyondReach(f"|d|={abs(x.d):.6g} m >= reach {self.reach:.6g} m")
        face, bary = self.locate(x.u, x.v, hint=hint)
        s, n_raw = self._lift(face, bary)
        return s + x.d * (n_raw / np.linalg.norm(n_raw))

    # --- inverse map ---

    def _residual_jacobian(self, face: int, bary: np.ndarray, d: float,
                           p: np.ndarray):
        s, n_raw = self._lift(face, bary)
        nn = np.linalg.norm(n_raw)
        n_hat = n_raw / nn
        r = s + d * n_hat - p
        proj = (np.eye(3) - np.outer(n_hat, n_hat)) / nn
        j = np.empty((3, 3))
        j[:, 0] = self._s_u[face] + d * (proj @ self._nraw_u[face])
        j[:, 1] = self._s_v[face] + d * (proj @ self._nraw_v[face])
        j[:, 2] = n_hat
        return r, j

    def task_coords(self, p, init: TaskCoords | None = None,
                    hint: int | None = None,
                    max_iter: int = 50, tol: float = 1e-9) -> TaskCoords:
        """Invert the embedding: find (u, v, d) with S(u,v) + d n(u,v) = p.

        Damped Newton iteration; the initial guess comes from the closest
        surface point unless ``init`` is given (warm start).  The returned
        coordinates satisfy |p - embed(result)| <= tol.

        Raises:
            BeyondReach: the point lies beyond the foliation reach.
            NoConvergence: Newton failed within ``max_iter`` iterations.
        """
        p = np.asarray(p, dtype=np.float64)
        if init is not None:
            u, v, d = init.u, init.v, init.d
        else:
            fidx, bary, foot, dist = closest_point(self.mesh, p)
            if dist >= self.reach:
                raise BeyondReach(
                    f"point at distance {dist:.6g} m >= reach {self.reach:.6g} m")
            uvf = self.param.uv[self.mesh.faces[fidx]]
            u, v = bary @ uvf
            n_foot = bary @ self.mesh.normals[self.mesh.faces[fidx]]
            n_foot /= np.linalg.norm(n_foot)
            d = float(np.dot(p - foot, n_foot))
            hint = fidx

        face, bary = self.locate(u, v, hint=hint, clamp=True)
        r, j = self._residual_jacobian(face, bary, d, p)
        r2 = float(r @ r)
        for _ in range(max_iter):
            if r2 <= tol * tol:
                if abs(d) >= self.reach:
                    raise BeyondReach(
                        f"|d|={abs(d):.6g} m >= reach {self.reach:.6g} m")
                return TaskCoords(u=float(u), v=float(v), d=float(d))
            try:
                step = np.linalg.solve(j, -r)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(j, -r, rcond=None)[0]
            scale = 1.0
            for _ in range(12):  # halve on residual increase
                u_n = u + scale * step[0]
                v_n = v + scale * step[1]
                d_n = d + scale * step[2]
                face_n, bary_n = self.locate(u_n, v_n, hint=face, clamp=True)
                r_n, j_n = self._residual_jacobian(face_n, bary_n, d_n, p)
                r2_n = float(r_n @ r_n)
                if r2_n < r2 or scale < 1e-6:
                    break
                scale *= 0.5
            u, v, d, face, r, j, r2 = u_n, v_n, d_n, face_n, r_n, j_n, r2_n
        if r2 <= 1e-16:  # residual contract still met at 1e-8 m
            return TaskCoords(u=float(u), v=float(v), d=float(d))
        raise NoConvergence(
            f"no convergence after {max_iter} iterations, |r|={np.sqrt(r2):.3g} m")
