"""Probe, controller and contact parameter containers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _vec(x, n=3) -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    if a.shape != (n,):
        raise ValueError(f"expected a {n}-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class ProbeState:
    """Rigid-body state of the simulated ultrasound probe.

    The probe axis is the body z-axis.  ``q`` is a unit quaternion
    (w, x, y, z); ``w`` is the angular velocity in world coordinates.
    """

    p: np.ndarray
    q: np.ndarray
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))
    w: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "p", _vec(self.p))
        object.__setattr__(self, "q", _vec(self.q, 4))
        object.__setattr__(self, "v", _vec(self.v))
        object.__setattr__(self, "w", _vec(self.w))
        if abs(np.linalg.norm(self.q) - 1.0) > 1e-9:
            raise ValueError("quaternion must have unit norm")


@dataclass(frozen=True)
class TaskError:
    """Control errors along the leaf frame, in meters and meters/second.

    e_u, e_v are tangential, e_d normal; ``de`` are the matching rates.
    """

    e_u: float
    e_v: float
    e_d: float
    de_u: float = 0.0
    de_v: float = 0.0
    de_d: float = 0.0


@dataclass(frozen=True)
class ImpedanceGains:
    """Diagonal spring-damper gains in the leaf frame plus an orientation
    spring aligning the probe axis with the inward surface normal."""

    k_u: float
    k_v: float
    k_d: float
    d_u: float
    d_v: float
    d_d: float
    k_rot: float = 0.0
    d_rot: float = 0.0

    def __post_init__(self):
        if min(self.k_u, self.k_v, self.k_d, self.d_u, self.d_v, self.d_d,
               self.k_rot, self.d_rot) < 0:
            raise ValueError("gains must be non-negative")


@dataclass(frozen=True)
class ContactModel:
    """Unilateral penalty tissue contact: spring on penetration depth."""

    stiffness: float       # N/m
    damping: float = 0.0   # N*s/m

    def __post_init__(self):
        if self.stiffness <= 0 or self.damping < 0:
            raise ValueError("need stiffness > 0 and damping >= 0")


@dataclass(frozen=True)
class ProbeParams:
    """Probe mass and diagonal body inertia."""

    mass: float
    inertia: np.ndarray = field(default_factory=lambda: np.full(3, 1e-3))

    def __post_init__(self):
        object.__setattr__(self, "inertia", _vec(self.inertia))
        if self.mass <= 0 or np.any(self.inertia <= 0):
            raise ValueError("mass and inertia components must be positive")
