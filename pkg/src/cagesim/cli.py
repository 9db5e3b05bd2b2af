"""Command line entry points: single runs, fault sweeps, profile dumps.

A run writes the timeseries CSV, the binary record, the spectrum CSV, the
peaks JSON, a manifest echoing every effective parameter with the derived
quantities, and the report figures. Sweeps repeat a run over one fault axis
with per-point isolation and a shared summary.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .dynamics import FaultSpec, SimulationEngine
from .geometry import EccentricityConfig
from .inductance import dump_profile_csv
from .spectrum import label_fault_peaks, spectrum_of_record

SWEEP_AXES = ("delta_s", "delta_d", "broken_bars")


def run(config: RunConfig, out_dir=None) -> dict:
    """Execute one simulation and write all artifacts; returns the manifest."""
    out = Path(out_dir if out_dir is not None else config.outputs.directory)
    out.mkdir(parents=True, exist_ok=True)

    engine = SimulationEngine(config.motor, config.fault,
                              mutual_skew=config.sim.skew)
    record = engine.simulate(config.sim.t_end, rtol=config.sim.rtol,
                             atol=config.sim.atol,
                             resample_rate=config.sim.resample_rate)
    sl = record.steady_slice()
    slip = record.measured_slip(sl)
    spec = spectrum_of_record(record)
    peaks = label_fault_peaks(spec, config.motor.supply_frequency, slip,
                              config.motor.pole_pairs, config.motor.n_bars)

    if config.outputs.timeseries_csv:
        record.to_csv(out / "timeseries.csv")
    if config.outputs.binary_record:
        record.to_npz(out / "record.npz")
    if config.outputs.spectrum_csv:
        spec.to_csv(out / "spectrum.csv")
    if config.outputs.peaks_json:
        spec.peaks_to_json(out / "peaks.json")

    manifest = {
        "config": config.effective_dict(),
        "derived": {
            "measured_slip": slip,
            "steady_speed_mean": float(np.mean(record.omega[sl])),
            "steady_torque_mean": float(np.mean(record.torque[sl])),
            "settle_time": record.settle_time(),
            "first_overshoot_time": record.first_overshoot_time(),
            "startup_peak_current": record.startup_peak_current(),
            "phase_rms": record.phase_rms(0, sl),
            "spectrum_resolution_hz": spec.resolution,
        },
        "peaks": [p.to_dict() for p in peaks],
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")

    if config.outputs.figures:
        from . import plots
        plots.save_timeseries_figure(record, out / "timeseries.png")
        plots.save_spectrum_figure(spec, out / "spectrum.png")
    return manifest


def _fault_for_value(base: FaultSpec, axis: str, value) -> FaultSpec:
    if axis == "delta_s":
        ecc = dataclasses.replace(base.eccentricity, delta_s=float(value))
        return dataclasses.replace(base, eccentricity=ecc)
    if axis == "delta_d":
        ecc = dataclasses.replace(base.eccentricity, delta_d=float(value))
        return dataclasses.replace(base, eccentricity=ecc)
    if axis == "broken_bars":
        count = int(value)
        return dataclasses.replace(base, broken_bars=tuple(range(2, 2 + count)))
    raise ConfigError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")


def _format_value(axis, value) -> str:
    if axis == "broken_bars":
        return f"{int(value):d}"
    return f"{float(value):g}"


def _sweep_point(config: RunConfig, axis: str, value, out_dir: str) -> dict:
    cfg = dataclasses.replace(config,
                              fault=_fault_for_value(config.fault, axis, value))
    manifest = run(cfg, out_dir=out_dir)
    row = {"value": value}
    row.update(manifest["derived"])
    best = {}
    for p in manifest["peaks"]:
        if p["present"]:
            key = f"{p['family']}_db"
            best[key] = max(best.get(key, -1e9), p["mag_db"])
    row.update(best)
    return row


def sweep(config: RunConfig, axis: str, values, out_dir=None,
          workers: int = 1) -> dict:
    """One run per axis value; failures are isolated and the sweep continues."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")
    if not values:
        raise ConfigError("sweep needs at least one value")
    out = Path(out_dir if out_dir is not None else config.outputs.directory)
    out.mkdir(parents=True, exist_ok=True)

    dirs = [out / f"{axis}={_format_value(axis, v)}" for v in values]
    rows: list[dict] = [None] * len(values)
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_sweep_point, config, axis, v, str(d)): k
                    for k, (v, d) in enumerate(zip(values, dirs))}
            for fut in concurrent.futures.as_completed(futs):
                k = futs[fut]
                try:
                    rows[k] = fut.result()
                except Exception as exc:
                    rows[k] = {"value": values[k], "error": str(exc)}
    else:
        for k, (v, d) in enumerate(zip(values, dirs)):
            try:
                rows[k] = _sweep_point(config, axis, v, str(d))
            except Exception as exc:
                rows[k] = {"value": v, "error": str(exc)}

    columns = ["value"]
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    with open(out / "summary.csv", "w", encoding="utf-8") as fh:
        fh.write("# cagesim sweep summary v1\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            cells = []
            for c in columns:
                v = row.get(c, "")
                cells.append(f"{v:.12g}" if isinstance(v, float) else str(v))
            fh.write(",".join(cells) + "\n")
    summary = {"axis": axis, "values": list(values), "rows": rows,
               "config": config.effective_dict()}
    with open(out / "sweep_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    if config.outputs.figures:
        from . import plots
        plots.save_sweep_figure(
            values, rows,
            ["first_overshoot_time", "settle_time", "ecc0_db", "ecc1_db",
             "PSH_db", "broken_bar_db"],
            axis, out / "sweep_summary.png")
    return summary


def dump_inductance_profile(config: RunConfig, block: str, i: int, j: int,
                            out_dir=None, n_points: int = 2000) -> Path:
    """Write one inductance entry over a rotor-angle grid (CSV + figure)."""
    out = Path(out_dir if out_dir is not None else config.outputs.directory)
    out.mkdir(parents=True, exist_ok=True)
    model = config.motor.inductance_model(mutual_skew=config.sim.skew)
    thetas = np.linspace(0.0, 2 * np.pi, n_points, endpoint=False)
    values = model.profile(config.fault.eccentricity, block, i, j, thetas)
    label = f"{block}[{i},{j}]"
    path = out / f"profile_{block}_{i}_{j}.csv"
    dump_profile_csv(path, thetas, values)
    if config.outputs.figures:
        from . import plots
        plots.save_profile_figure(thetas, values, label,
                                  out / f"profile_{block}_{i}_{j}.png")
    return path


def _apply_cli_overrides(config: RunConfig, args) -> RunConfig:
    fault = config.fault
    if args.bar_model:
        fault = dataclasses.replace(fault, bar_model=args.bar_model)
    sim = config.sim
    if args.no_skew:
        sim = dataclasses.replace(sim, skew=False)
    cfg = dataclasses.replace(config, fault=fault, sim=sim)
    cfg.fault.validate_against(cfg.motor)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cagesim",
        description="Squirrel-cage induction motor transient simulation and "
                    "current signature analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML configuration file")
    common.add_argument("--out", help="output directory (overrides config)")
    common.add_argument("--no-skew", action="store_true",
                        help="disable rotor-bar skew in the mutual inductances")
    common.add_argument("--bar-model", choices=("scale", "eliminate"),
                        help="broken-bar model")

    p_run = sub.add_parser("run", parents=[common],
                           help="single simulation run")
    p_run.add_argument("--inductance-profile", nargs=3,
                       metavar=("BLOCK", "I", "J"),
                       help="dump one inductance entry over a rotor-angle "
                            "grid instead of simulating (e.g. Lsr 1 1)")

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="repeat the run over one fault axis")
    p_sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated axis values")
    p_sweep.add_argument("--workers", type=int, default=1,
                         help="worker pool size")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _apply_cli_overrides(load_config(args.config), args)
        if args.command == "run":
            if args.inductance_profile:
                block, i, j = args.inductance_profile
                path = dump_inductance_profile(config, block, int(i), int(j),
                                               out_dir=args.out)
                print(f"profile written: {path}")
            else:
                manifest = run(config, out_dir=args.out)
                d = manifest["derived"]
                print(f"run complete: slip={d['measured_slip']:.4f} "
                      f"settle={d['settle_time']:.3f}s "
                      f"overshoot={d['first_overshoot_time']:.3f}s")
        else:
            values = [float(v) for v in args.values.split(",") if v.strip()]
            if args.axis == "broken_bars":
                values = [int(v) for v in values]
            summary = sweep(config, args.axis, values, out_dir=args.out,
                            workers=args.workers)
            errors = [r for r in summary["rows"] if "error" in r]
            print(f"sweep complete: {len(summary['rows']) - len(errors)} ok, "
                  f"{len(errors)} failed")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
