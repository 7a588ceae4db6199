"""Time-parametrized scan trajectories in (u, v, d) coordinates.

Trajectories are piecewise-linear knot sequences: serpentine raster
coverage of a parameter-plane rectangle on one leaf, and leaf-switching
runs that repeat a base path at several offset levels with linear d-ramps
in between (companion signum signal included).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BeyondReach, EmptyTrajectory, OutsideDomain
from .meshgeom import TaskCoords


@dataclass(frozen=True)
class Trajectory:
    """Time-sorted linear-interpolation knots in task coordinates.

    Attributes:
        times: (n,) strictly increasing times, seconds.
        coords: (n, 3) rows of (u, v, d).
    """

    times: np.ndarray
    coords: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        c = np.asarray(self.coords, dtype=np.float64).reshape(len(t), 3)
        if len(t) == 0:
            raise EmptyTrajectory("trajectory needs at least one knot")
        if len(t) > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("knot times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "coords", c)

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    def signum_signal(self, t) -> np.ndarray:
        """sign(d_des) sampled at times t (values -1, 0, +1)."""
        d = np.interp(np.asarray(t, dtype=np.float64),
                      self.times, self.coords[:, 2])
        return np.sign(d)


def sample_setpoint(traj: Trajectory, t: float) -> tuple[TaskCoords, np.ndarray]:
    """Clamped linear interpolation of the trajectory at time t.

    Returns (setpoint, rate) with rate the (du/dt, dv/dt, dd/dt) slope of
    the active segment; zero before the first and after the last knot.
    """
    times = traj.times
    coords = traj.coords
    if t <= times[0]:
        return TaskCoords(*coords[0]), np.zeros(3)
    if t >= times[-1]:
        return TaskCoords(*coords[-1]), np.zeros(3)
    i = int(np.searchsorted(times, t, side="right")) - 1
    dt_seg = times[i + 1] - times[i]
    frac = (t - times[i]) / dt_seg
    c = coords[i] + frac * (coords[i + 1] - coords[i])
    rate = (coords[i + 1] - coords[i]) / dt_seg
    return TaskCoords(*c), rate


def raster_scan(uv_rect, spacing: float, speed: float, d: float = 0.0) -> Trajectory:
    """Serpentine coverage of a (u, v) rectangle at constant leaf d.

    ``uv_rect`` is (u_min, v_min, u_max, v_max), which must lie inside the
    unit disk; rows are spaced ``spacing`` apart in v and traversed
    alternately left/right at constant parameter speed.
    """
    if spacing <= 0 or speed <= 0:
        raise ValueError("spacing and speed must be positive")
    u0, v0, u1, v1 = map(float, uv_rect)
    if u1 < u0 or v1 < v0:
        raise OutsideDomain("malformed rectangle")
    if max(np.hypot(u, v) for u in (u0, u1) for v in (v0, v1)) > 1.0:
        raise OutsideDomain("rectangle corners must lie inside the unit disk")

    n_rows = int(np.floor((v1 - v0) / spacing + 1e-9)) + 1
    pts = []
    for r in range(n_rows):
        v = min(v0 + r * spacing, v1)
        if r % 2 == 0:
            pts.extend([(u0, v), (u1, v)])
        else:
            pts.extend([(u1, v), (u0, v)])
    # collapse zero-length segments (degenerate rectangles)
    dedup = [pts[0]]
    for p in pts[1:]:
        if p != dedup[-1]:
            dedup.append(p)
    uv = np.asarray(dedup)

    times = [0.0]
    for a, b in zip(uv[:-1], uv[1:]):
        times.append(times[-1] + float(np.linalg.norm(b - a)) / speed)
    coords = np.column_stack([uv, np.full(len(uv), d)])
    return Trajectory(times=np.asarray(times), coords=coords)


def leaf_switch_trajectory(base_times, base_uv, d_levels, dwell: float = 1.0,
                           reach: float = np.inf) -> Trajectory:
    """Repeat a (u, v) base path on several leaves with d-ramps between.

    ``base_times``/``base_uv`` describe one pass of the path (times
    starting at 0); the pass is replayed once per entry of ``d_levels`` at
    that constant offset, joined by linear d-ramps of ``dwell`` seconds at
    the path end point.  The companion signum signal of the desired
    distance is available via Trajectory.signum_signal.

    Raises:
        BeyondReach: a level with |d| >= reach.
    """
    base_times = np.asarray(base_times, dtype=np.float64)
    base_uv = np.asarray(base_uv, dtype=np.float64).reshape(len(base_times), 2)
    d_levels = [float(d) for d in d_levels]
    if not d_levels:
        raise ValueError("need at least one d level")
    if dwell <= 0:
        raise ValueError("dwell must be positive")
    for d in d_levels:
        if abs(d) >= reach:
            raise BeyondReach(f"|d|={abs(d):.6g} m >= reach {reach:.6g} m")

    rev_times = base_times[-1] - base_times[::-1]
    times: list[float] = []
    coords: list[tuple[float, float, float]] = []
    t0 = 0.0
    for i, d in enumerate(d_levels):
        # odd passes replay the path reversed so consecutive passes join
        # continuously at the ramp point
        pass_times = base_times if i % 2 == 0 else rev_times
        pass_uv = base_uv if i % 2 == 0 else base_uv[::-1]
        for k, (t, (u, v)) in enumerate(zip(pass_times, pass_uv)):
            if i > 0 and k == 0:
                continue  # coincides with the ramp end knot
            times.append(t0 + t)
            coords.append((u, v, d))
        t0 = times[-1]
        if i + 1 < len(d_levels):
            # d-ramp at the current end point into the next leaf
            end_uv = pass_uv[-1]
            times.append(t0 + dwell)
            coords.append((end_uv[0], end_uv[1], d_levels[i + 1]))
            t0 = times[-1]
    return Trajectory(times=np.asarray(times), coords=np.asarray(coords))
