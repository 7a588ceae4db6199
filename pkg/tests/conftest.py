import numpy as np
import pytest

from foliascan.meshgeom import Foliation, parametrize_disk
from foliascan.structlight import StereoRig
from foliascan.synth import bumpy_patch, grid_mesh, sphere_patch


@pytest.fixture(scope="session")
def flat_grid():
    return grid_mesh(3, 3, 1.0)


@pytest.fixture(scope="session")
def sphere_mesh():
    return sphere_patch(radius=0.1, half_width=0.06, n=9)


@pytest.fixture(scope="session")
def sphere_fol(sphere_mesh):
    return Foliation(sphere_mesh, parametrize_disk(sphere_mesh), reach=0.08)


@pytest.fixture(scope="session")
def bumpy_mesh():
    return bumpy_patch()


@pytest.fixture(scope="session")
def rig():
    return StereoRig(width=256, height=192, f=500.0, cx=128.0, cy=96.0,
                     baseline=0.05)


@pytest.fixture(scope="session")
def small_rig():
    return StereoRig(width=64, height=48, f=120.0, cx=32.0, cy=24.0,
                     baseline=0.04)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
