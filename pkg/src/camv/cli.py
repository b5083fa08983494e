"""Batch front end: ``camv <subcommand> --scenario file.json [--out DIR] [--grid-step DEG]``.

Exit status: 0 success, 1 I/O failure, 2 configuration error, 3 domain or
geometry error. Failures print one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from pathlib import Path

from . import __version__
from .beamsteer import SteeringCommand, excitation_for, write_excitation_csv
from .errors import CamvError, ConfigError, DomainError
from .farfield import (
    AngleGrid,
    compute_pattern,
    export_pattern_csv,
    grating_lobe_onset,
    pattern_metrics,
    steered_case,
)
from .fileio import atomic_writer, fmt9
from .geometry import element_profile, lattice_rows, validate_params
from .io_export import extrude_profile, write_stl
from .rfmath import band_below_threshold, read_rl_csv
from .scenario import Scenario, load_scenario

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_DOMAIN = 0, 1, 2, 3

SWEEP_COLUMNS = [
    "frequency_hz",
    "theta0_deg",
    "phi0_deg",
    "beam_theta_deg",
    "beam_phi_deg",
    "pointing_error_deg",
    "peak_theta_deg",
    "peak_phi_deg",
    "peak_gain_dbi_est",
    "hpbw_deg",
    "sidelobe_db",
    "grating_lobe",
    "grating_onset_deg",
]


def _tag(frequency: float, scan) -> str:
    return f"{frequency / 1e9:g}ghz_theta{scan.theta_deg:g}_phi{scan.phi_deg:g}"


def _write_rows(path: Path, header, rows) -> None:
    with atomic_writer(path, newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(header)
        out.writerows(rows)


def _grid(sc: Scenario) -> AngleGrid:
    try:
        return sc.grid()
    except DomainError as exc:
        raise ConfigError("$.grid", str(exc)) from None


def _onset_deg(sc: Scenario, frequency: float) -> float:
    pitch = max(sc.layout.pitch_x, sc.layout.pitch_y) * 1e-3
    return grating_lobe_onset(pitch, frequency).degrees


# --------------------------------------------------------------------------- subcommands


def cmd_geom(sc: Scenario, out: Path) -> list[Path]:
    from .plotting import write_profile_svg

    written = []
    variants = [("samv", False)] + ([("camv", True)] if sc.corrugated else [])
    built = [(name, element_profile(sc.params, corrugated=c, n_samples=sc.taper_samples)) for name, c in variants]
    meshes = [(name, extrude_profile(p, sc.thickness)) for name, p in built]
    for (name, profile), (_, mesh) in zip(built, meshes):
        path = out / f"{name}_profile.csv"
        _write_rows(path, ["x_mm", "y_mm"], ([fmt9(x), fmt9(y)] for x, y in profile.points))
        written.append(path)
        written.append(write_profile_svg(profile, out / f"{name}_profile.svg", title=f"{name.upper()} element"))
        written.append(write_stl(mesh, out / f"{name}_element.stl", sc.stl_mode))
    path = out / "lattice.csv"
    _write_rows(
        path,
        ["element_index", "row", "col", "x_mm", "y_mm"],
        ([k, r, c, fmt9(x), fmt9(y)] for k, r, c, x, y in lattice_rows(sc.layout)),
    )
    written.append(path)
    return written


def cmd_steer(sc: Scenario, out: Path) -> list[Path]:
    excitations = [
        (f, s, excitation_for(sc.layout, SteeringCommand(s.theta, s.phi, f))) for f in sc.frequencies for s in sc.scans
    ]
    written = []
    for f, s, exc in excitations:
        path = out / f"excitation_{_tag(f, s)}.csv"
        write_excitation_csv(exc, path)
        written.append(path)
    return written


def cmd_pattern(sc: Scenario, out: Path) -> list[Path]:
    from .plotting import write_pattern_plot

    grid = _grid(sc)
    written = []
    summary = []
    for f in sc.frequencies:
        for s in sc.scans:
            exc = excitation_for(sc.layout, SteeringCommand(s.theta, s.phi, f))
            pattern = compute_pattern(sc.layout, exc, f, grid, sc.model)
            m = pattern_metrics(pattern, cut_phi=s.phi)
            tag = _tag(f, s)
            export_pattern_csv(pattern, out / f"pattern_{tag}.csv")
            write_pattern_plot(pattern, out / f"pattern_{tag}.png", title=f"{f / 1e9:g} GHz, scan {s.theta_deg:g}°")
            written += [out / f"pattern_{tag}.csv", out / f"pattern_{tag}.png"]
            summary.append(
                [
                    fmt9(f),
                    fmt9(s.theta_deg),
                    fmt9(s.phi_deg),
                    fmt9(math.degrees(m.peak_theta)),
                    fmt9(math.degrees(m.peak_phi)),
                    fmt9(m.peak_db),
                    fmt9(m.hpbw_deg),
                    "" if m.sidelobe_db is None else fmt9(m.sidelobe_db),
                    int(m.grating_lobe),
                ]
            )
    path = out / "pattern_metrics.csv"
    _write_rows(
        path,
        [
            "frequency_hz",
            "theta0_deg",
            "phi0_deg",
            "peak_theta_deg",
            "peak_phi_deg",
            "peak_gain_dbi_est",
            "hpbw_deg",
            "sidelobe_db",
            "grating_lobe",
        ],
        summary,
    )
    return written + [path]


def sweep_rows(sc: Scenario):
    grid = _grid(sc)
    return [steered_case(sc.layout, f, s.theta, s.phi, sc.model, grid) for f in sc.frequencies for s in sc.scans]


def cmd_sweep(sc: Scenario, out: Path) -> list[Path]:
    from .plotting import write_pattern_plot

    rows = sweep_rows(sc)
    table = []
    for r in rows:
        m = r.metrics
        table.append(
            [
                fmt9(r.frequency),
                fmt9(math.degrees(r.theta0)),
                fmt9(math.degrees(r.phi0)),
                fmt9(math.degrees(r.beam_theta)),
                fmt9(math.degrees(r.beam_phi)),
                fmt9(math.degrees(r.pointing_error)),
                fmt9(math.degrees(m.peak_theta)),
                fmt9(math.degrees(m.peak_phi)),
                fmt9(m.peak_db),
                fmt9(m.hpbw_deg),
                "" if m.sidelobe_db is None else fmt9(m.sidelobe_db),
                int(m.grating_lobe),
                fmt9(_onset_deg(sc, r.frequency)),
            ]
        )
    path = out / "sweep_metrics.csv"
    _write_rows(path, SWEEP_COLUMNS, table)
    plot = write_pattern_plot(rows, out / "sweep_cuts.png", title="Scan sweep (estimated gain, element model applied)")
    return [path, plot]


def cmd_rf(sc: Scenario, out: Path) -> list[Path]:
    if sc.rf is None:
        raise ConfigError("$.rf", "rf subcommand needs an rf section with input_csv")
    if not sc.rf.input_csv.is_file():
        raise ConfigError("$.rf.input_csv", f"file not found: {sc.rf.input_csv}")
    points = read_rl_csv(sc.rf.input_csv)
    bands = band_below_threshold(points, sc.rf.threshold_rl_db)
    path = out / "rf_bands.csv"
    _write_rows(
        path,
        ["band", "f_lo_hz", "f_hi_hz", "bandwidth_hz", "threshold_rl_db"],
        ([i + 1, fmt9(lo), fmt9(hi), fmt9(hi - lo), fmt9(sc.rf.threshold_rl_db)] for i, (lo, hi) in enumerate(bands)),
    )
    for lo, hi in bands:
        print(f"RL >= {sc.rf.threshold_rl_db:g} dB: {lo / 1e9:.6g}-{hi / 1e9:.6g} GHz")
    if not bands:
        print(f"RL >= {sc.rf.threshold_rl_db:g} dB: no band")
    return [path]


def cmd_validate(sc: Scenario, out: Path) -> list[Path]:
    report = validate_params(sc.params)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for e in report.errors:
        print(f"error: {e}", file=sys.stderr)
    doc = {**report.to_dict(), "f_design_hz": sc.params.f_design, "params": sc.params.to_dict()}
    path = out / "validation.json"
    with atomic_writer(path) as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if not report.ok:
        raise _ReportedFailure(path)
    return [path]


class _ReportedFailure(Exception):
    """Validation found errors; the report file is still written."""


COMMANDS = {
    "geom": (cmd_geom, "element profiles (CSV, SVG), extruded STL and lattice table"),
    "steer": (cmd_steer, "per-element excitation CSV for each frequency and scan"),
    "pattern": (cmd_pattern, "pattern CSV and cut plot for each frequency and scan"),
    "sweep": (cmd_sweep, "scan-sweep metrics table and overlaid cuts"),
    "rf": (cmd_rf, "return-loss band extraction"),
    "validate": (cmd_validate, "parameter validation report"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="camv", description="Vivaldi phased-array geometry and pattern tool.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, type=Path, help="scenario JSON file")
        p.add_argument("--out", type=Path, help="output directory (overrides the scenario)")
        p.add_argument("--grid-step", type=float, help="theta grid step in degrees")
    return parser


def _fail(code: int, kind: str, message: str, path: str | None = None) -> int:
    record = {"status": "error", "code": kind, "message": message}
    if path is not None:
        record["path"] = path
    print(json.dumps(record, sort_keys=True), file=sys.stderr)
    return code


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        if args.grid_step is not None:
            if not (math.isfinite(args.grid_step) and args.grid_step > 0):
                raise ConfigError("--grid-step", f"must be positive, got {args.grid_step!r}")
            sc = dataclasses.replace(sc, theta_step_deg=args.grid_step)
        out = args.out if args.out is not None else sc.output_dir
        out.mkdir(parents=True, exist_ok=True)
        func, _ = COMMANDS[args.command]
        written = func(sc, out)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, exc.code, exc.message, exc.path)
    except _ReportedFailure as exc:
        return _fail(EXIT_DOMAIN, "validation_failed", f"parameter errors; see {exc.args[0]}")
    except CamvError as exc:
        return _fail(EXIT_DOMAIN, exc.code, str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, "io_error", str(exc))
    for path in written:
        print(path)
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))
