import numpy as np

from foliascan.meshgeom import build_mesh, closest_point
from foliascan.synth import bumpy_patch


def _closest_on_triangle_oracle(tri, p):
    """Brute force: best of all vertex / edge / face candidate projections."""
    candidates = list(tri)
    a, b, c = tri
    for e0, e1 in ((a, b), (b, c), (c, a)):
        d = e1 - e0
        t = np.clip(np.dot(p - e0, d) / np.dot(d, d), 0.0, 1.0)
        candidates.append(e0 + t * d)
    n = np.cross(b - a, c - a)
    n = n / np.linalg.norm(n)
    foot = p - np.dot(p - a, n) * n
    # barycentric test for the in-face projection
    m = np.column_stack([b - a, c - a])
    uv, *_ = np.linalg.lstsq(m, foot - a, rcond=None)
    if uv[0] >= 0 and uv[1] >= 0 and uv.sum() <= 1:
        candidates.append(foot)
    dists = [np.linalg.norm(p - q) for q in candidates]
    return candidates[int(np.argmin(dists))]


def _closest_oracle(mesh, p):
    best = None
    best_d = np.inf
    for tri in mesh.faces:
        q = _closest_on_triangle_oracle(mesh.vertices[tri], p)
        d = np.linalg.norm(p - q)
        if d < best_d:
            best, best_d = q, d
    return best, best_d


def test_orthogonal_projection():
    mesh = build_mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2)])
    _, bary, foot, dist = closest_point(mesh, (0.25, 0.25, 1.0))
    assert np.allclose(foot, (0.25, 0.25, 0.0), atol=1e-12)
    assert abs(dist - 1.0) < 1e-12
    assert abs(bary.sum() - 1.0) < 1e-9
    assert np.all(bary >= 0) and np.all(bary <= 1)


def test_hypotenuse_midpoint():
    mesh = build_mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2)])
    _, _, foot, dist = closest_point(mesh, (2.0, 2.0, 0.0))
    assert np.allclose(foot, (0.5, 0.5, 0.0), atol=1e-12)
    assert abs(dist - np.sqrt(4.5)) < 1e-12


def test_matches_exhaustive_oracle(rng):
    mesh = bumpy_patch(n=7)
    lo = mesh.vertices.min(axis=0) - 0.05
    hi = mesh.vertices.max(axis=0) + 0.05
    for _ in range(300):
        p = rng.uniform(lo, hi)
        _, bary, foot, dist = closest_point(mesh, p)
        foot_ref, dist_ref = _closest_oracle(mesh, p)
        assert np.linalg.norm(foot - foot_ref) < 1e-9
        assert abs(dist - dist_ref) < 1e-9
        assert abs(bary.sum() - 1.0) < 1e-9
