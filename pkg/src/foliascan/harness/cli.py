"""Command line interface.

Subcommands:
    foliascan depth-sim <cfg.toml>   structured-light depth pipeline
    foliascan scan-sim <cfg.toml>    impedance-controlled scan simulation
    foliascan param <mesh.off>       disk parametrization CSV export
    foliascan report <dir>           print summaries found under a directory

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
The FOLIASCAN_OUT environment variable overrides the output directory.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ..errors import (
    ConfigError, FoliascanError, IoFailure, NoConvergence, NonFiniteState,
    SolverFailure,
)
from ..meshgeom import load_mesh, parametrize_disk, save_param_csv
from .config import load_config
from .export import export_artifacts, read_summary
from .pipeline import run_depth_pipeline, run_scan_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _cmd_depth_sim(args) -> int:
    cfg = load_config(args.config)
    dmap, (depth, depth_valid), mesh, report = run_depth_pipeline(cfg)
    maps = {
        "disparity": (dmap.disp, dmap.valid),
        "depth": (depth, depth_valid),
    }
    written = export_artifacts(cfg.output_dir, report, maps=maps)
    print(f"disparity MAE: {report.disparity_mae:.4f} px, "
          f"valid fraction: {report.valid_fraction:.3f}")
    for alpha, beta, mae in report.perturbation_table:
        print(f"  perturbed alpha={alpha:g} beta={beta:g}: MAE {mae:.4f} px")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_scan_sim(args) -> int:
    cfg = load_config(args.config)
    report, log, _ = run_scan_scenario(cfg)
    written = export_artifacts(cfg.output_dir, report, log=log)
    print(f"RMSE_d: {report.rmse_d * 1e3:.4f} mm, "
          f"RMSE_u: {report.rmse_u * 1e3:.4f} mm, "
          f"RMSE_v: {report.rmse_v * 1e3:.4f} mm, "
          f"passivity violations: {report.passivity_violations}")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_param(args) -> int:
    mesh = load_mesh(args.mesh)
    param = parametrize_disk(mesh)
    out_dir = Path(os.environ.get("FOLIASCAN_OUT", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    out = out_dir / (Path(args.mesh).stem + "_param.csv")
    save_param_csv(param, out)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    paths = sorted(Path(args.dir).rglob("summary.json"))
    if not paths:
        print(f"no summary.json under {args.dir}", file=sys.stderr)
        return EXIT_CONFIG
    for path in paths:
        data = read_summary(path)
        print(f"{path}:")
        for key, value in data.items():
            if key == "perturbation_table":
                for alpha, beta, mae in value:
                    print(f"  perturbed alpha={alpha:g} beta={beta:g}: MAE {mae:.4f}")
            else:
                print(f"  {key}: {value}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foliascan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("depth-sim", help="run the structured-light depth pipeline")
    p.add_argument("config", help="scenario TOML file")
    p.set_defaults(func=_cmd_depth_sim)

    p = sub.add_parser("scan-sim", help="run the impedance-controlled scan simulation")
    p.add_argument("config", help="scenario TOML file")
    p.set_defaults(func=_cmd_scan_sim)

    p = sub.add_parser("param", help="parametrize a mesh file to the unit disk")
    p.add_argument("mesh", help="ASCII OFF or PLY mesh file")
    p.set_defaults(func=_cmd_param)

    p = sub.add_parser("report", help="print run summaries under a directory")
    p.add_argument("dir", help="directory containing summary.json files")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, IoFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoConvergence, NonFiniteState, SolverFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FoliascanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
