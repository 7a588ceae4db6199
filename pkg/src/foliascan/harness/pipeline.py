"""Scenario execution: depth pipeline, scan simulation, metrics."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..control import (
    ProbeState, contact_force, impedance_wrench, step_dynamics, storage_function,
    task_error,
)
from ..control.dynamics import quat_exp
from ..errors import EmptyRun
from ..meshgeom import Foliation, TaskCoords, TriangleMesh, load_mesh, parametrize_disk
from ..planning import Trajectory, leaf_switch_trajectory, raster_scan, sample_setpoint
from ..structlight import (
    DisparityMap, binarize_stack, decode_codewords, depth_to_mesh, disparity_mae,
    disparity_to_depth, generate_gray_patterns, match_disparity, perturb_images,
    simulate_capture,
)
from .config import ScenarioConfig


@dataclass
class RunReport:
    """Aggregate scenario metrics (SI units; errors in meters/pixels)."""

    rmse_d: float = 0.0
    rmse_u: float = 0.0
    rmse_v: float = 0.0
    disparity_mae: float = 0.0
    valid_fraction: float = 0.0
    max_e_d: float = 0.0
    passivity_violations: int = 0
    wall_clock: float = 0.0
    perturbation_table: list = field(default_factory=list)  # (alpha, beta, mae)

    def as_dict(self) -> dict:
        return {
            "rmse_d": self.rmse_d, "rmse_u": self.rmse_u, "rmse_v": self.rmse_v,
            "disparity_mae": self.disparity_mae,
            "valid_fraction": self.valid_fraction,
            "max_e_d": self.max_e_d,
            "passivity_violations": self.passivity_violations,
            "wall_clock": self.wall_clock,
            "perturbation_table": [list(row) for row in self.perturbation_table],
        }


@dataclass
class StepLog:
    """Column-wise per-step record of a scan simulation."""

    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    d: np.ndarray
    e_u: np.ndarray
    e_v: np.ndarray
    e_d: np.ndarray
    f_n: np.ndarray
    storage: np.ndarray
    sgn_d_des: np.ndarray
    tracking: np.ndarray  # mask: counted toward RMSE (transients excluded)

    def __len__(self) -> int:
        return len(self.t)


def compute_metrics(e_u, e_v, e_d, mask=None) -> RunReport:
    """RMSE per channel over the masked samples.

    Raises:
        EmptyRun: no sample selected.
    """
    e_u = np.asarray(e_u, dtype=np.float64)
    e_v = np.asarray(e_v, dtype=np.float64)
    e_d = np.asarray(e_d, dtype=np.float64)
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        e_u, e_v, e_d = e_u[mask], e_v[mask], e_d[mask]
    if e_d.size == 0:
        raise EmptyRun("no samples to compute metrics over")
    rmse = lambda x: float(np.sqrt(np.mean(np.square(x))))
    return RunReport(rmse_d=rmse(e_d), rmse_u=rmse(e_u), rmse_v=rmse(e_v),
                     max_e_d=float(np.max(np.abs(e_d))))


def _decode_and_match(left, right, dec):
    lb, lv = binarize_stack(left, contrast_floor=dec.contrast_floor)
    rb, rv = binarize_stack(right, contrast_floor=dec.contrast_floor)
    return match_disparity(
        decode_codewords(lb, lv), decode_codewords(rb, rv),
        window=dec.window, d_max=dec.d_max,
        mismatch_ceiling=dec.mismatch_ceiling, subpixel=dec.subpixel,
    )


def run_depth_pipeline(cfg: ScenarioConfig):
    """Full structured-light pipeline for the configured scene.

    Returns (DisparityMap, (depth, depth_valid), TriangleMesh, RunReport).
    The report carries the clean-run MAE and, when a perturbation grid is
    configured, one (alpha, beta, mae) row per grid point.
    """
    if cfg.scene is None or cfg.rig is None or cfg.decoder is None:
        raise EmptyRun("depth pipeline needs [scene], [rig] and [decoder] config")
    t_start = time.perf_counter()
    rig = cfg.rig
    dec = cfg.decoder
    patterns = generate_gray_patterns(rig.width, dec.n_bits)
    left, right, disp_gt = simulate_capture(cfg.scene, rig, patterns)
    truth = DisparityMap(disp=disp_gt, valid=np.ones_like(disp_gt, dtype=bool))

    dmap = _decode_and_match(left, right, dec)
    mae, frac = disparity_mae(dmap, truth)

    table = []
    for alpha, beta in cfg.perturbations:
        dmap_p = _decode_and_match(
            perturb_images(left, alpha, beta), perturb_images(right, alpha, beta), dec)
        mae_p, _ = disparity_mae(dmap_p, truth)
        table.append((alpha, beta, mae_p))

    depth, depth_valid = disparity_to_depth(dmap, rig)
    mesh = _mesh_from_depth(depth, depth_valid, cfg)
    report = RunReport(disparity_mae=mae, valid_fraction=frac,
                       perturbation_table=table,
                       wall_clock=time.perf_counter() - t_start)
    return dmap, (depth, depth_valid), mesh, report


def _mesh_from_depth(depth, valid, cfg: ScenarioConfig) -> TriangleMesh:
    roi = cfg.mesh.roi
    origin = (0, 0)
    if roi is not None:
        x0, y0, x1, y1 = roi
        depth = depth[y0:y1, x0:x1]
        valid = valid[y0:y1, x0:x1]
        origin = (x0, y0)
    return depth_to_mesh(depth, valid, cfg.rig, stride=cfg.mesh.stride,
                         discontinuity=cfg.mesh.discontinuity, origin=origin)


def _load_scenario_mesh(cfg: ScenarioConfig) -> TriangleMesh:
    if cfg.mesh.source == "file":
        return load_mesh(cfg.mesh.path)
    _, (depth, valid), mesh, _ = run_depth_pipeline(cfg)
    return mesh


def build_trajectory(cfg: ScenarioConfig, reach: float) -> Trajectory:
    spec = cfg.trajectory
    base = raster_scan(spec.rect, spec.spacing, spec.speed, d=0.0)
    if spec.kind == "raster":
        return Trajectory(times=base.times,
                          coords=np.column_stack([base.coords[:, :2],
                                                  np.full(len(base.times), spec.d)]))
    return leaf_switch_trajectory(base.times, base.coords[:, :2],
                                  spec.d_levels, dwell=spec.dwell, reach=reach)


def _initial_state(fol: Foliation, setpoint: TaskCoords) -> ProbeState:
    p0 = fol.embed(setpoint)
    frame = fol.surface_frame(setpoint.u, setpoint.v)
    target = -frame.n_hat  # probe axis presses inward
    z = np.array([0.0, 0.0, 1.0])
    axis = np.cross(z, target)
    s = np.linalg.norm(axis)
    c = float(z @ target)
    if s < 1e-12:
        q = np.array([1.0, 0.0, 0.0, 0.0]) if c > 0 else np.array([0.0, 1.0, 0.0, 0.0])
    else:
        q = quat_exp(axis / s * np.arctan2(s, c))
    return ProbeState(p=p0, q=q)


def run_scan_scenario(cfg: ScenarioConfig):
    """Simulate the configured scan trajectory under impedance control.

    Returns (RunReport, StepLog, Trajectory).  RMSE is accumulated only
    over the tracking phase: samples are excluded while the desired leaf
    distance is ramping and for ``transient_exclusion`` seconds after.
    """
    t_start = time.perf_counter()
    mesh = _load_scenario_mesh(cfg)
    param = parametrize_disk(mesh)
    fol = Foliation(mesh, param, reach=cfg.mesh.reach)
    traj = build_trajectory(cfg, fol.reach)

    n_steps = int(round(cfg.duration / cfg.dt))
    if n_steps < 1:
        raise EmptyRun("zero-duration run")
    dt = cfg.dt

    sp0, _ = sample_setpoint(traj, 0.0)
    state = _initial_state(fol, sp0)
    x = fol.task_coords(state.p)

    cols = {k: np.empty(n_steps) for k in
            ("t", "u", "v", "d", "e_u", "e_v", "e_d", "f_n", "storage", "sgn")}
    tracking = np.zeros(n_steps, dtype=bool)
    violations = 0
    prev_v = None
    prev_static = False
    last_unsteady = 0.0
    sp_pos = fol.embed(sp0)

    for k in range(n_steps):
        t = k * dt
        sp, rate = sample_setpoint(traj, t)
        sp_next, _ = sample_setpoint(traj, t + dt)
        sp_pos_next = fol.embed(sp_next)
        sp_vel = (sp_pos_next - sp_pos) / dt

        err = task_error(state, sp, fol, setpoint_velocity=sp_vel, probe_coords=x)
        frame = fol.surface_frame(x.u, x.v)
        wrench = impedance_wrench(err, frame, state, cfg.gains)
        f_c = contact_force(state, fol, cfg.contact, probe_coords=x)
        f_ext = f_c
        if cfg.hand_guided_force is not None:
            f_ext = f_c + (cfg.hand_guided_force[0] * frame.t_u
                           + cfg.hand_guided_force[1] * frame.t_v)
        v_now = storage_function(state, err, cfg.gains, cfg.contact, x.d,
                                 n_hat=frame.n_hat, params_mass=cfg.probe.mass,
                                 inertia=cfg.probe.inertia)

        static = bool(np.all(rate == 0.0)) and cfg.hand_guided_force is None
        if static and prev_static and prev_v is not None:
            slack = dt * (1.0 + prev_v)
            if v_now > prev_v + slack:
                violations += 1
        prev_v, prev_static = v_now, static

        if abs(rate[2]) > 0:
            last_unsteady = t
        tracking[k] = (t - last_unsteady) >= cfg.transient_exclusion

        cols["t"][k] = t
        cols["u"][k] = x.u
        cols["v"][k] = x.v
        cols["d"][k] = x.d
        cols["e_u"][k] = err.e_u
        cols["e_v"][k] = err.e_v
        cols["e_d"][k] = err.e_d
        cols["f_n"][k] = float(np.linalg.norm(f_c))
        cols["storage"][k] = v_now
        cols["sgn"][k] = np.sign(sp.d)

        state = step_dynamics(state, wrench, (f_ext, np.zeros(3)), cfg.probe, dt)
        x = fol.task_coords(state.p, init=x)
        sp_pos = sp_pos_next

    log = StepLog(t=cols["t"], u=cols["u"], v=cols["v"], d=cols["d"],
                  e_u=cols["e_u"], e_v=cols["e_v"], e_d=cols["e_d"],
                  f_n=cols["f_n"], storage=cols["storage"],
                  sgn_d_des=cols["sgn"], tracking=tracking)
    report = compute_metrics(log.e_u, log.e_v, log.e_d, mask=tracking)
    report.passivity_violations = violations
    report.wall_clock = time.perf_counter() - t_start
    return report, log, traj
