from .config import (
    DecoderSettings, MeshSource, ScenarioConfig, TrajectorySpec, load_config,
)
from .export import (
    export_artifacts, read_step_log, read_summary, write_error_plot,
    write_map_csv, write_step_log, write_summary,
)
from .pipeline import (
    RunReport, StepLog, build_trajectory, compute_metrics, run_depth_pipeline,
    run_scan_scenario,
)
from .rasters import load_float_raster, load_pgm, save_float_raster, save_pgm

__all__ = [
    "DecoderSettings", "MeshSource", "ScenarioConfig", "TrajectorySpec",
    "load_config",
    "RunReport", "StepLog", "build_trajectory", "compute_metrics",
    "run_depth_pipeline", "run_scan_scenario",
    "export_artifacts", "read_step_log", "read_summary", "write_error_plot",
    "write_map_csv", "write_step_log", "write_summary",
    "load_float_raster", "load_pgm", "save_float_raster", "save_pgm",
]
