"""Semi-implicit Euler integration of the free-floating probe body."""
from __future__ import annotations

import numpy as np

from ..errors import NonFiniteState
from .types import ProbeParams, ProbeState


def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def quat_exp(rotvec: np.ndarray) -> np.ndarray:
    """Unit quaternion of a rotation vector (axis * angle)."""
    angle = np.linalg.norm(rotvec)
    if angle < 1e-12:
        return np.array([1.0, *(0.5 * rotvec)]) / np.sqrt(1.0 + 0.25 * angle**2)
    axis = rotvec / angle
    half = 0.5 * angle
    return np.array([np.cos(half), *(np.sin(half) * axis)])


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_rotate(q: np.ndarray, vec: np.ndarray) -> np.ndarray:
    return quat_to_matrix(q) @ np.asarray(vec, dtype=np.float64)


def probe_axis(state: ProbeState) -> np.ndarray:
    """World direction of the probe (body z) axis."""
    return quat_to_matrix(state.q)[:, 2]


def step_dynamics(state: ProbeState, applied_wrench, external_wrench,
                  params: ProbeParams, dt: float) -> ProbeState:
    """One semi-implicit Euler step of the rigid probe.

    Velocities are updated from the total wrench first, then positions from
    the new velocities; the orientation advances by the exponential of the
    angular-velocity increment and is renormalized.

    Raises:
        NonFiniteState: the update produced NaN or infinity.
    """
    if not 0.0 < dt <= 0.01:
        raise ValueError("dt must be in (0, 0.01] s")
    f_a, tau_a = applied_wrench
    f_e, tau_e = external_wrench
    f = np.asarray(f_a, dtype=np.float64) + np.asarray(f_e, dtype=np.float64)
    tau = np.asarray(tau_a, dtype=np.float64) + np.asarray(tau_e, dtype=np.float64)

    inertia = params.inertia
    v = state.v + dt * f / params.mass
    w = state.w + dt * (tau - np.cross(state.w, inertia * state.w)) / inertia
    p = state.p + dt * v
    q = quat_mul(quat_exp(dt * w), state.q)
    q /= np.linalg.norm(q)

    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(v))
            and np.all(np.isfinite(w)) and np.all(np.isfinite(q))):
        raise NonFiniteState("integrator produced a non-finite state")
    return ProbeState(p=p, q=q, v=v, w=w)
