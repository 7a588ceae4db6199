"""Triangle mesh container, validation and ASCII OFF / PLY input-output.

Meshes are immutable after construction.  ``build_mesh`` validates that the
input is an edge-manifold patch with disk topology (a single boundary loop)
and computes angle-weighted outward vertex normals.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    DegenerateFace,
    IndexOutOfRange,
    IoFailure,
    NonManifoldEdge,
    NotDiskTopology,
)

_AREA_FLOOR = 1e-12  # m^2; faces at or below are rejected


@dataclass(frozen=True)
class TriangleMesh:
    """Validated triangle mesh patch with disk topology.

    Attributes:
        vertices: (n, 3) float array, meters.
        faces: (m, 3) int array, counter-clockwise seen from outside.
        normals: (n, 3) unit angle-weighted vertex normals.
        boundary_loop: ordered vertex indices of the single boundary loop.
    """

    vertices: np.ndarray
    faces: np.ndarray
    normals: np.ndarray
    boundary_loop: np.ndarray = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def face_normals(self) -> np.ndarray:
        """Unnormalized face normals (cross products), (m, 3)."""
        v = self.vertices
        f = self.faces
        return np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])


def _boundary_loop(faces: np.ndarray, n_vertices: int) -> np.ndarray:
    """Extract the single boundary loop, validating manifoldness and topology."""
    edge_count: dict[tuple[int, int], int] = {}
    directed: set[tuple[int, int]] = set()
    for a, b, c in faces:
        for i, j in ((a, b), (b, c), (c, a)):
            i, j = int(i), int(j)
            if (i, j) in directed:
                raise NonManifoldEdge(
                    f"directed edge ({i},{j}) appears twice; inconsistent orientation"
                )
            directed.add((i, j))
            key = (i, j) if i < j else (j, i)
            edge_count[key] = edge_count.get(key, 0) + 1
    if any(c > 2 for c in edge_count.values()):
        raise NonManifoldEdge("an edge is shared by more than two faces")

    # Boundary directed edges: those whose reverse is absent.
    succ: dict[int, int] = {}
    n_boundary_edges = 0
    for i, j in directed:
        if (j, i) not in directed:
            if i in succ:
                raise NonManifoldEdge(f"boundary forks at vertex {i}")
            succ[i] = j
            n_boundary_edges += 1
    if n_boundary_edges == 0:
        raise NotDiskTopology("mesh is closed (no boundary); expected a disk patch")

    start = next(iter(succ))
    loop = [start]
    cur = succ[start]
    while cur != start:
        loop.append(cur)
        if cur not in succ:
            raise NotDiskTopology("boundary is not a closed loop")
        cur = succ[cur]
        if len(loop) > n_boundary_edges:
            raise NotDiskTopology("boundary loop does not close consistently")
    if len(loop) != n_boundary_edges:
        raise NotDiskTopology("more than one boundary loop")

    # Euler characteristic of a disk: V - E + F = 1.
    n_edges = len(edge_count)
    used = np.unique(faces)
    if len(used) - n_edges + len(faces) != 1:
        raise NotDiskTopology("Euler characteristic is not 1 (not a disk)")
    if len(used) != n_vertices:
        raise NotDiskTopology("mesh contains vertices referenced by no face")
    return np.asarray(loop, dtype=np.int64)


def _vertex_normals(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Angle-weighted vertex normals, normalized to unit length."""
    normals = np.zeros_like(vertices)
    fn = np.cross(
        vertices[faces[:, 1]] - vertices[faces[:, 0]],
        vertices[faces[:, 2]] - vertices[faces[:, 0]],
    )
    fn_unit = fn / np.linalg.norm(fn, axis=1, keepdims=True)
    for corner in range(3):
        i = faces[:, corner]
        j = faces[:, (corner + 1) % 3]
        k = faces[:, (corner + 2) % 3]
        e1 = vertices[j] - vertices[i]
        e2 = vertices[k] - vertices[i]
        cosang = np.einsum("ij,ij->i", e1, e2) / (
            np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1)
        )
        ang = np.arccos(np.clip(cosang, -1.0, 1.0))
        np.add.at(normals, i, fn_unit * ang[:, None])
    lens = np.linalg.norm(normals, axis=1, keepdims=True)
    if np.any(lens < 1e-30):
        raise DegenerateFace("a vertex has a vanishing accumulated normal")
    return normals / lens


def build_mesh(vertices, faces) -> TriangleMesh:
    """Validate vertices/faces and build a TriangleMesh.

    Raises:
        IndexOutOfRange: face index >= vertex count (or negative).
        DegenerateFace: face area <= 1e-12 m^2.
        NonManifoldEdge: edge shared by >2 faces or inconsistent orientation.
        NotDiskTopology: not a single patch with exactly one boundary loop.
    """
    v = np.ascontiguousarray(np.asarray(vertices, dtype=np.float64))
    f = np.ascontiguousarray(np.asarray(faces, dtype=np.int64))
    if v.ndim != 2 or v.shape[1] != 3 or len(v) < 3:
        raise IndexOutOfRange("vertices must be (n>=3, 3)")
    if f.ndim != 2 or f.shape[1] != 3 or len(f) < 1:
        raise IndexOutOfRange("faces must be (m>=1, 3)")
    if f.min() < 0 or f.max() >= len(v):
        raise IndexOutOfRange("face index outside vertex array")

    areas = 0.5 * np.linalg.norm(
        np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]]), axis=1
    )
    bad = np.nonzero(areas <= _AREA_FLOOR)[0]
    if len(bad):
        raise DegenerateFace(f"faces {bad.tolist()} have area <= {_AREA_FLOOR} m^2")

    loop = _boundary_loop(f, len(v))
    normals = _vertex_normals(v, f)
    for arr in (v, f, normals, loop):
        arr.setflags(write=False)
    return TriangleMesh(vertices=v, faces=f, normals=normals, boundary_loop=loop)


# --- file input / output ---

def save_off(mesh: TriangleMesh, path) -> None:
    """Write the mesh as ASCII OFF (coordinates in meters)."""
    try:
        with open(path, "w") as fh:
            fh.write("OFF\n")
            fh.write(f"{mesh.n_vertices} {mesh.n_faces} 0\n")
            for p in mesh.vertices:
                fh.write(f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g}\n")
            for tri in mesh.faces:
                fh.write(f"3 {tri[0]} {tri[1]} {tri[2]}\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def save_ply(mesh: TriangleMesh, path) -> None:
    """Write the mesh as ASCII PLY (coordinates in meters)."""
    try:
        with open(path, "w") as fh:
            fh.write("ply\nformat ascii 1.0\n")
            fh.write(f"element vertex {mesh.n_vertices}\n")
            fh.write("property double x\nproperty double y\nproperty double z\n")
            fh.write(f"element face {mesh.n_faces}\n")
            fh.write("property list uchar int vertex_indices\nend_header\n")
            for p in mesh.vertices:
                fh.write(f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g}\n")
            for tri in mesh.faces:
                fh.write(f"3 {tri[0]} {tri[1]} {tri[2]}\n")
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def _load_off(lines: list[str]) -> TriangleMesh:
    if not lines or lines[0].strip() != "OFF":
        raise IoFailure("not an OFF file")
    counts = lines[1].split()
    nv, nf = int(counts[0]), int(counts[1])
    verts = [[float(x) for x in lines[2 + i].split()[:3]] for i in range(nv)]
    faces = []
    for i in range(nf):
        parts = lines[2 + nv + i].split()
        if parts[0] != "3":
            raise IoFailure("only triangle faces are supported")
        faces.append([int(x) for x in parts[1:4]])
    return build_mesh(verts, faces)


def _load_ply(lines: list[str]) -> TriangleMesh:
    nv = nf = 0
    header_end = 0
    for i, line in enumerate(lines):
        tok = line.split()
        if tok[:2] == ["element", "vertex"]:
            nv = int(tok[2])
        elif tok[:2] == ["element", "face"]:
            nf = int(tok[2])
        elif tok[:1] == ["format"] and tok[1] != "ascii":
            raise IoFailure("only ASCII PLY is supported")
        elif tok[:1] == ["end_header"]:
            header_end = i + 1
            break
    verts = [[float(x) for x in lines[header_end + i].split()[:3]] for i in range(nv)]
    faces = []
    for i in range(nf):
        parts = lines[header_end + nv + i].split()
        if parts[0] != "3":
            raise IoFailure("only triangle faces are supported")
        faces.append([int(x) for x in parts[1:4]])
    return build_mesh(verts, faces)


def load_mesh(path) -> TriangleMesh:
    """Load an ASCII OFF or PLY mesh file, validated through build_mesh."""
    try:
        with open(path) as fh:
            lines = [ln for ln in (raw.strip() for raw in fh) if ln and not ln.startswith("#")]
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    if not lines:
        raise IoFailure(f"empty mesh file: {path}")
    if lines[0] == "OFF":
        return _load_off(lines)
    if lines[0] == "ply":
        return _load_ply(lines)
    raise IoFailure(f"unrecognized mesh format: {path}")
