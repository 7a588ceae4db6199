from .mesh import TriangleMesh, build_mesh, load_mesh, save_off, save_ply
from .closest import closest_point
from .param import DiskParam, parametrize_disk, save_param_csv
from .foliation import Foliation, SurfaceFrame, TaskCoords

__all__ = [
    "TriangleMesh", "build_mesh", "load_mesh", "save_off", "save_ply",
    "closest_point",
    "DiskParam", "parametrize_disk", "save_param_csv",
    "Foliation", "SurfaceFrame", "TaskCoords",
]
