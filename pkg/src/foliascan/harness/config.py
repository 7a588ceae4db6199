"""TOML scenario configuration: parsing and up-front validation.

Every module precondition expressible on the raw parameters is checked
here, before any simulation work starts; violations raise ConfigError.
"""
from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..control import ContactModel, ImpedanceGains, ProbeParams
from ..errors import ConfigError
from ..structlight import DepthScene, StereoRig


@dataclass(frozen=True)
class DecoderSettings:
    n_bits: int
    window: int = 3
    d_max: int | None = None
    contrast_floor: float = 0.05
    mismatch_ceiling: float = 0.1
    subpixel: bool = True


@dataclass(frozen=True)
class MeshSource:
    source: str                 # "reconstructed" | "file"
    path: Path | None = None
    stride: int = 8
    discontinuity: float = 0.05
    roi: tuple | None = None    # (x0, y0, x1, y1) pixel crop before meshing
    reach: float | None = None  # foliation reach override, meters


@dataclass(frozen=True)
class TrajectorySpec:
    kind: str                   # "raster" | "leaf_switch"
    rect: tuple = (-0.3, -0.3, 0.3, 0.3)
    spacing: float = 0.15
    speed: float = 0.05         # uv-units per second
    d: float = 0.0
    d_levels: tuple = (0.0, 0.05, -0.05)
    dwell: float = 1.0


@dataclass(frozen=True)
class ScenarioConfig:
    scene: DepthScene | None
    rig: StereoRig | None
    decoder: DecoderSettings | None
    mesh: MeshSource
    gains: ImpedanceGains
    contact: ContactModel
    probe: ProbeParams
    trajectory: TrajectorySpec
    dt: float = 1e-3
    duration: float = 60.0
    transient_exclusion: float = 2.0
    seed: int = 0
    perturbations: tuple = ()   # (alpha, beta) pairs
    hand_guided_force: tuple | None = None  # scripted tangential force, N
    output_dir: Path = Path("out")


def _get(table: dict, key: str, default=None, required: bool = False):
    if key in table:
        return table[key]
    if required:
        raise ConfigError(f"missing required config key: {key}")
    return default


def _scene(tab: dict | None) -> DepthScene | None:
    if tab is None:
        return None
    try:
        return DepthScene(
            kind=_get(tab, "kind", required=True),
            plane_z=float(_get(tab, "plane_z", 1.5)),
            centers=tuple(tuple(c) for c in _get(tab, "centers", [])),
            radii=tuple(_get(tab, "radii", [])),
        )
    except Exception as exc:
        raise ConfigError(f"bad [scene]: {exc}") from exc


def _rig(tab: dict | None) -> StereoRig | None:
    if tab is None:
        return None
    try:
        width = int(_get(tab, "width", required=True))
        height = int(_get(tab, "height", required=True))
        return StereoRig(
            width=width, height=height,
            f=float(_get(tab, "f", required=True)),
            cx=float(_get(tab, "cx", width / 2)),
            cy=float(_get(tab, "cy", height / 2)),
            baseline=float(_get(tab, "baseline", required=True)),
        )
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"bad [rig]: {exc}") from exc


def load_config(path) -> ScenarioConfig:
    """Parse and validate a scenario TOML file.

    The FOLIASCAN_OUT environment variable overrides the output directory.

    Raises:
        ConfigError: unreadable file or any precondition violation.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    rig = _rig(raw.get("rig"))
    scene = _scene(raw.get("scene"))

    dec_tab = raw.get("decoder", {})
    decoder = None
    if rig is not None:
        n_bits = int(_get(dec_tab, "n_bits", int(np.ceil(np.log2(rig.width)))))
        window = int(_get(dec_tab, "window", 3))
        if window < 1 or window % 2 == 0:
            raise ConfigError("decoder window must be odd and >= 1")
        if 2**n_bits < rig.width:
            raise ConfigError("decoder n_bits cannot encode the image width")
        decoder = DecoderSettings(
            n_bits=n_bits,
            window=window,
            d_max=(int(dec_tab["d_max"]) if "d_max" in dec_tab else None),
            contrast_floor=float(_get(dec_tab, "contrast_floor", 0.05)),
            mismatch_ceiling=float(_get(dec_tab, "mismatch_ceiling", 0.1)),
            subpixel=bool(_get(dec_tab, "subpixel", True)),
        )

    mesh_tab = raw.get("mesh", {})
    source = _get(mesh_tab, "source", "reconstructed")
    if source not in ("reconstructed", "file"):
        raise ConfigError(f"mesh source must be reconstructed|file, got {source!r}")
    mesh_path = None
    if source == "file":
        mesh_path = Path(_get(mesh_tab, "path", required=True))
        if not mesh_path.is_absolute():
            mesh_path = path.parent / mesh_path
        if not mesh_path.exists():
            raise ConfigError(f"mesh file does not exist: {mesh_path}")
    elif scene is None or rig is None:
        raise ConfigError("reconstructed mesh source needs [scene] and [rig]")
    stride = int(_get(mesh_tab, "stride", 8))
    if stride < 1:
        raise ConfigError("mesh stride must be >= 1")
    roi = _get(mesh_tab, "roi")
    mesh = MeshSource(
        source=source, path=mesh_path, stride=stride,
        discontinuity=float(_get(mesh_tab, "discontinuity", 0.05)),
        roi=tuple(int(x) for x in roi) if roi else None,
        reach=(float(mesh_tab["reach"]) if "reach" in mesh_tab else None),
    )

    try:
        g = raw.get("gains", {})
        gains = ImpedanceGains(
            k_u=float(_get(g, "k_u", 200.0)), k_v=float(_get(g, "k_v", 200.0)),
            k_d=float(_get(g, "k_d", 2000.0)),
            d_u=float(_get(g, "d_u", 30.0)), d_v=float(_get(g, "d_v", 30.0)),
            d_d=float(_get(g, "d_d", 90.0)),
            k_rot=float(_get(g, "k_rot", 5.0)), d_rot=float(_get(g, "d_rot", 0.1)),
        )
        c = raw.get("contact", {})
        contact = ContactModel(
            stiffness=float(_get(c, "stiffness", 30.0)),
            damping=float(_get(c, "damping", 2.0)),
        )
        p = raw.get("probe", {})
        probe = ProbeParams(
            mass=float(_get(p, "mass", 1.0)),
            inertia=np.asarray(_get(p, "inertia", [1e-3, 1e-3, 1e-3]), dtype=float),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    t = raw.get("trajectory", {})
    kind = _get(t, "kind", "leaf_switch")
    if kind not in ("raster", "leaf_switch"):
        raise ConfigError(f"trajectory kind must be raster|leaf_switch, got {kind!r}")
    spacing = float(_get(t, "spacing", 0.15))
    speed = float(_get(t, "speed", 0.05))
    dwell = float(_get(t, "dwell", 1.0))
    if spacing <= 0 or speed <= 0 or dwell <= 0:
        raise ConfigError("trajectory spacing, speed and dwell must be positive")
    rect = tuple(float(x) for x in _get(t, "rect", (-0.3, -0.3, 0.3, 0.3)))
    if len(rect) != 4:
        raise ConfigError("trajectory rect must have 4 entries")
    if max(np.hypot(u, v) for u in rect[0::2] for v in rect[1::2]) > 1.0:
        raise ConfigError("trajectory rect must lie inside the unit disk")
    traj = TrajectorySpec(
        kind=kind, rect=rect, spacing=spacing, speed=speed,
        d=float(_get(t, "d", 0.0)),
        d_levels=tuple(float(x) for x in _get(t, "d_levels", (0.0, 0.05, -0.05))),
        dwell=dwell,
    )

    sim = raw.get("sim", {})
    dt = float(_get(sim, "dt", 1e-3))
    duration = float(_get(sim, "duration", 60.0))
    if not 0.0 < dt <= 0.01:
        raise ConfigError("sim dt must be in (0, 0.01] s")
    if duration <= 0:
        raise ConfigError("sim duration must be positive")

    pert = raw.get("perturbation", {})
    alphas = [float(a) for a in _get(pert, "alphas", [])]
    betas = [float(b) for b in _get(pert, "betas", [])]
    if any(a <= 0 for a in alphas):
        raise ConfigError("perturbation alphas must be positive")
    perturbations = tuple((a, b) for a in alphas for b in betas)

    hand = raw.get("hand_guided", {})
    hand_force = None
    if "force" in hand:
        hand_force = tuple(float(x) for x in hand["force"])
        if len(hand_force) != 2:
            raise ConfigError("hand_guided force must be (f_u, f_v)")

    out_tab = raw.get("output", {})
    out_dir = Path(os.environ.get("FOLIASCAN_OUT", _get(out_tab, "dir", "out")))

    return ScenarioConfig(
        scene=scene, rig=rig, decoder=decoder, mesh=mesh,
        gains=gains, contact=contact, probe=probe, trajectory=traj,
        dt=dt, duration=duration,
        transient_exclusion=float(_get(sim, "transient_exclusion", 2.0)),
        seed=int(_get(sim, "seed", 0)),
        perturbations=perturbations,
        hand_guided_force=hand_force,
        output_dir=out_dir,
    )
