"""Task-space impedance control in surface (u, v, d) coordinates.

The controller renders a diagonal spring-damper between probe and setpoint
along the local leaf frame, plus a rotational spring aligning the probe
axis anti-parallel to the outward surface normal (pressing inward).  With
the tangential stiffnesses at zero the probe can be slid freely along a
leaf while orientation and distance stay regulated.
"""
from __future__ import annotations

import numpy as np

from ..meshgeom import Foliation, SurfaceFrame, TaskCoords
from .dynamics import probe_axis
from .types import ContactModel, ImpedanceGains, ProbeState, TaskError


def task_error(state: ProbeState, setpoint: TaskCoords, fol: Foliation,
               setpoint_velocity=None,
               probe_coords: TaskCoords | None = None) -> TaskError:
    """Setpoint error decomposed onto the leaf frame at the probe.

    The Cartesian error embed(setpoint) - p is projected onto the frame
    (t_u, t_v, n_hat) at the probe's own (u, v).  Rates are the frame
    decomposition of (setpoint feed velocity - probe velocity);
    ``setpoint_velocity`` defaults to zero (static setpoint).

    ``probe_coords`` may carry precomputed task coordinates of the probe
    (warm start); otherwise they are recovered here.
    """
    x = probe_coords if probe_coords is not None else fol.task_coords(state.p)
    frame = fol.surface_frame(x.u, x.v)
    e_c = fol.embed(setpoint) - state.p
    sp_vel = np.zeros(3) if setpoint_velocity is None else np.asarray(setpoint_velocity)
    dv = sp_vel - state.v
    return TaskError(
        e_u=float(e_c @ frame.t_u),
        e_v=float(e_c @ frame.t_v),
        e_d=float(e_c @ frame.n_hat),
        de_u=float(dv @ frame.t_u),
        de_v=float(dv @ frame.t_v),
        de_d=float(dv @ frame.n_hat),
    )


def impedance_wrench(err: TaskError, frame: SurfaceFrame, state: ProbeState,
                     gains: ImpedanceGains):
    """Control wrench (force N, torque N*m) of the impedance law."""
    f = ((gains.k_u * err.e_u + gains.d_u * err.de_u) * frame.t_u
         + (gains.k_v * err.e_v + gains.d_v * err.de_v) * frame.t_v
         + (gains.k_d * err.e_d + gains.d_d * err.de_d) * frame.n_hat)
    axis = probe_axis(state)
    tau = gains.k_rot * np.cross(axis, -frame.n_hat) - gains.d_rot * state.w
    return f, tau


def contact_force(state: ProbeState, fol: Foliation, contact: ContactModel,
                  probe_coords: TaskCoords | None = None) -> np.ndarray:
    """Unilateral penalty force from the tissue on the probe.

    Zero at or above the surface (d >= 0); below it a spring on the
    penetration depth plus normal damping, with the total normal force
    clamped to be non-adhesive (>= 0).
    """
    x = probe_coords if probe_coords is not None else fol.task_coords(state.p)
    if x.d >= 0:
        return np.zeros(3)
    frame = fol.surface_frame(x.u, x.v)
    magnitude = -contact.stiffness * x.d - contact.damping * float(state.v @ frame.n_hat)
    return max(magnitude, 0.0) * frame.n_hat


def storage_function(state: ProbeState, err: TaskError, gains: ImpedanceGains,
                     contact: ContactModel, d: float,
                     n_hat: np.ndarray | None = None,
                     params_mass: float = 1.0, inertia=None) -> float:
    """Energy stored in probe motion, controller springs and tissue contact.

    Kinetic energy plus the translational spring potentials, the contact
    penalty potential for penetration, and the orientation alignment
    potential.  Non-increasing along zero-input motion toward a fixed
    setpoint (up to integrator slack).
    """
    inertia = np.full(3, 1e-3) if inertia is None else np.asarray(inertia)
    kinetic = 0.5 * params_mass * float(state.v @ state.v) \
        + 0.5 * float(state.w @ (inertia * state.w))
    spring = 0.5 * (gains.k_u * err.e_u**2 + gains.k_v * err.e_v**2
                    + gains.k_d * err.e_d**2)
    pen = min(d, 0.0)
    contact_pot = 0.5 * contact.stiffness * pen * pen
    orient = 0.0
    if n_hat is not None and gains.k_rot > 0:
        axis = probe_axis(state)
        orient = gains.k_rot * (1.0 - float(axis @ (-n_hat)))
    return kinetic + spring + contact_pot + orient
