import numpy as np
import pytest

from foliascan.errors import BeyondReach, EmptyTrajectory, OutsideDomain
from foliascan.planning import (
    Trajectory, leaf_switch_trajectory, raster_scan, sample_setpoint,
)


def _path_length(traj):
    return float(np.sum(np.linalg.norm(np.diff(traj.coords[:, :2], axis=0),
                                       axis=1)))


def test_raster_row_count_and_length():
    # 0.4 x 0.2 rectangle, spacing 0.1 -> 3 rows, each 0.4 long, two 0.1
    # cross-links: total parameter path length 1.4
    traj = raster_scan((-0.2, -0.1, 0.2, 0.1), spacing=0.1, speed=0.1)
    vs = np.unique(traj.coords[:, 1])
    assert np.allclose(vs, [-0.1, 0.0, 0.1])
    assert abs(_path_length(traj) - (3 * 0.4 + 2 * 0.1)) < 1e-12
    assert abs(traj.duration - _path_length(traj) / 0.1) < 1e-12


def test_raster_serpentine_alternates():
    traj = raster_scan((0.0, 0.0, 0.4, 0.2), spacing=0.1, speed=1.0)
    # row r endpoints alternate direction: even rows left->right
    uv = traj.coords[:, :2]
    assert np.allclose(uv[0], [0.0, 0.0])
    assert np.allclose(uv[1], [0.4, 0.0])
    assert np.allclose(uv[2], [0.4, 0.1])
    assert np.allclose(uv[3], [0.0, 0.1])


def test_raster_degenerate_point():
    traj = raster_scan((0.1, 0.2, 0.1, 0.2), spacing=0.1, speed=1.0, d=0.03)
    assert len(traj.times) == 1
    assert np.allclose(traj.coords[0], [0.1, 0.2, 0.03])
    sp, rate = sample_setpoint(traj, 5.0)
    assert (sp.u, sp.v, sp.d) == (0.1, 0.2, 0.03)
    assert np.all(rate == 0)


def test_raster_rejects_out_of_disk():
    with pytest.raises(OutsideDomain):
        raster_scan((-0.9, -0.9, 0.9, 0.9), spacing=0.5, speed=0.1)
    with pytest.raises(OutsideDomain):
        raster_scan((0.3, 0.0, 0.1, 0.2), spacing=0.1, speed=0.1)
    with pytest.raises(ValueError):
        raster_scan((0.0, 0.0, 0.2, 0.2), spacing=0.0, speed=0.1)


def test_raster_constant_speed():
    traj = raster_scan((-0.2, -0.2, 0.2, 0.2), spacing=0.2, speed=0.25)
    seg_len = np.linalg.norm(np.diff(traj.coords[:, :2], axis=0), axis=1)
    seg_dt = np.diff(traj.times)
    assert np.allclose(seg_len / seg_dt, 0.25)


def test_sampling_midpoint_and_rate():
    traj = Trajectory(times=[0.0, 1.0], coords=[[0.0, 0.0, 0.0],
                                                [0.2, 0.0, 0.0]])
    sp, rate = sample_setpoint(traj, 0.5)
    assert abs(sp.u - 0.1) < 1e-12
    assert np.allclose(rate, [0.2, 0.0, 0.0])


def test_sampling_clamped_outside():
    traj = Trajectory(times=[1.0, 2.0], coords=[[0.1, 0.2, 0.0],
                                                [0.3, 0.2, 0.0]])
    before, r0 = sample_setpoint(traj, 0.0)
    after, r1 = sample_setpoint(traj, 10.0)
    assert (before.u, before.v) == (0.1, 0.2)
    assert (after.u, after.v) == (0.3, 0.2)
    assert np.all(r0 == 0) and np.all(r1 == 0)


def test_trajectory_validation():
    with pytest.raises(EmptyTrajectory):
        Trajectory(times=[], coords=np.zeros((0, 3)))
    with pytest.raises(ValueError):
        Trajectory(times=[0.0, 0.0], coords=np.zeros((2, 3)))


def test_leaf_switch_signum_steps():
    base_t = [0.0, 2.0]
    base_uv = [[0.0, 0.0], [0.3, 0.0]]
    traj = leaf_switch_trajectory(base_t, base_uv, [0.0, 0.05, -0.05],
                                  dwell=1.0)
    # pass 1 on d=0, ramp, pass 2 on +0.05, ramp, pass 3 on -0.05
    assert np.all(traj.signum_signal([0.5, 1.5]) == 0)
    assert np.all(traj.signum_signal([3.5, 4.5]) == 1)
    assert np.all(traj.signum_signal([6.5, 7.5]) == -1)


def test_leaf_switch_continuity_and_ramps():
    base_t = [0.0, 2.0, 4.0]
    base_uv = [[0.0, 0.0], [0.3, 0.0], [0.3, 0.2]]
    d_levels = [0.0, 0.04, -0.04]
    dwell = 0.5
    traj = leaf_switch_trajectory(base_t, base_uv, d_levels, dwell=dwell)
    # no (u, v) jump anywhere: consecutive knots move in uv or in d, never
    # discontinuously
    uv = traj.coords[:, :2]
    d = traj.coords[:, 2]
    for a, b, da, db in zip(uv[:-1], uv[1:], d[:-1], d[1:]):
        if da != db:
            assert np.allclose(a, b)  # ramps hold position
    # total duration: 3 passes of 4 s + 2 ramps of 0.5 s
    assert abs(traj.duration - (3 * 4.0 + 2 * dwell)) < 1e-12
    # ramp d-rate is (level gap)/dwell
    i = np.flatnonzero(np.diff(d) != 0)[0]
    rate = (d[i + 1] - d[i]) / (traj.times[i + 1] - traj.times[i])
    assert abs(rate - 0.04 / dwell) < 1e-12


def test_leaf_switch_odd_pass_reversed():
    base_t = [0.0, 1.0]
    base_uv = [[0.0, 0.0], [0.3, 0.1]]
    traj = leaf_switch_trajectory(base_t, base_uv, [0.0, 0.05], dwell=1.0)
    # second pass starts where the first ended
    sp_end1, _ = sample_setpoint(traj, 1.0)
    sp_start2, _ = sample_setpoint(traj, 2.0)
    assert (sp_end1.u, sp_end1.v) == (sp_start2.u, sp_start2.v) == (0.3, 0.1)
    sp_final, _ = sample_setpoint(traj, 3.0)
    assert (sp_final.u, sp_final.v) == (0.0, 0.0)


def test_leaf_switch_reach_guard():
    with pytest.raises(BeyondReach):
        leaf_switch_trajectory([0.0, 1.0], [[0, 0], [0.1, 0]],
                               [0.0, 0.06], dwell=1.0, reach=0.05)
    with pytest.raises(ValueError):
        leaf_switch_trajectory([0.0, 1.0], [[0, 0], [0.1, 0]], [],
                               dwell=1.0)
    with pytest.raises(ValueError):
        leaf_switch_trajectory([0.0, 1.0], [[0, 0], [0.1, 0]], [0.0],
                               dwell=0.0)


def test_leaf_switch_stays_in_unit_disk(rng):
    traj = raster_scan((-0.3, -0.3, 0.3, 0.3), spacing=0.3, speed=0.12)
    full = leaf_switch_trajectory(traj.times, traj.coords[:, :2],
                                  [0.0, 0.05, -0.05], dwell=1.0, reach=0.08)
    for t in rng.uniform(0.0, full.duration, 200):
        sp, _ = sample_setpoint(full, float(t))
        assert np.hypot(sp.u, sp.v) <= 1.0 + 1e-12
