"""Command-line front end: ``squeezed-dsp <subcommand> ...``.

Exit status: 0 on success, 1 when ``oracle-check`` finds a deviation above
tolerance, 2 on invalid arguments or inputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import double_lambda as dl
from . import single_lambda as sl
from . import validation
from .config import parse_float, parse_key_values
from .dynamics import evolve, read_schedule
from .fock import DEFAULT_MAX_TAIL
from .gaussian import SqueezeSpec
from .scan import PRESETS, GridSpec, grid_from_mapping, parse_axis, region, sweep

ORACLE_MAX_TAIL = 1e-3


class UsageError(Exception):
    """Invalid input detected after argument parsing; exit status 2."""


def _add_point_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=("single", "double"))
    p.add_argument("--x", type=parse_float, help="single-Lambda control ratio Omega_c/g")
    p.add_argument("--y1", type=parse_float, help="double-Lambda control ratio Omega_1/g_1")
    p.add_argument("--y2", type=parse_float, help="double-Lambda control ratio Omega_2/g_2")
    p.add_argument("--n-atoms", type=parse_float, help="number of atoms N >= 1")
    p.add_argument("--r", type=parse_float, help="squeezing magnitude r >= 0")
    p.add_argument("--delta", type=parse_float, help="squeezing angle (radians; 'pi/2' style accepted)")


def _add_output_flags(p: argparse.ArgumentParser, formats: tuple) -> None:
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squeezed-dsp",
        description="Squeezed dark-state polariton noise, correlation and entanglement calculator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="full report at one parameter point")
    _add_point_flags(p)
    p.add_argument("--config", type=Path, help="key = value file supplying any of the flags above")
    _add_output_flags(p, ("json", "csv"))

    p = sub.add_parser("scan", help="sweep a quantity or extract an entanglement region")
    _add_point_flags(p)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--grid", type=Path, help="grid config file (model, axis1, axis2, fixed parameters)")
    p.add_argument("--axis", action="append", type=parse_axis, metavar="'NAME MIN MAX COUNT [linear|log]'")
    p.add_argument("--quantity", action="append", help="report quantity to tabulate (repeatable)")
    p.add_argument("--criterion", help="region criterion: F, IC, G1, G2, H, IC_FA1, IC_FA2, IC_FF")
    p.add_argument("--workers", type=int, default=1, help="process-pool size (output is identical)")
    _add_output_flags(p, ("csv", "json", "svg"))

    p = sub.add_parser("dynamics", help="storage and retrieval trajectory for a control schedule")
    p.add_argument("--schedule", type=Path, required=True, help="'t,x' CSV or 'samples = t:x, ...' config")
    p.add_argument("--n-atoms", type=parse_float, required=True)
    p.add_argument("--r", type=parse_float, required=True)
    p.add_argument("--delta", type=parse_float, default=0.0)
    p.add_argument("--t-grid", help="'start:stop:count' or comma list (default: 101 points over the schedule)")
    _add_output_flags(p, ("csv", "json"))

    p = sub.add_parser("oracle-check", help="closed form vs Gaussian vs Fock comparison")
    p.add_argument("--model", choices=("single", "double", "both"), default="both")
    p.add_argument("--samples", type=int, default=10, help="random points per model")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r-max", type=parse_float, default=1.2)
    p.add_argument("--preset", action="store_true", help="use the fixed worked-example points instead of random ones")
    p.add_argument("--cutoff", type=int, help="Fock cutoff d (default 40 for 2 modes, 20 for 3)")
    p.add_argument("--max-tail", type=float, default=None, help=f"truncation tail limit (default {ORACLE_MAX_TAIL:g})")
    p.add_argument("--strict", action="store_true", help="flat 1e-6 Fock tolerance and 1e-6 tail limit")
    p.add_argument("--no-fock", action="store_true", help="compare closed forms and Gaussian route only")
    _add_output_flags(p, ("text", "json"))

    sub.add_parser("presets", help="list figure-reproduction presets")
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


_CONFIG_KEYS = {"model", "x", "y1", "y2", "n_atoms", "r", "delta"}


def _apply_config(args) -> None:
    if getattr(args, "config", None) is None:
        return
    try:
        values = parse_key_values(args.config.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    for key, value in values.items():
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, value if key == "model" else parse_float(value))


def _point(args):
    if args.model is None:
        raise UsageError("--model is required")
    if args.r is None:
        raise UsageError("--r is required")
    if args.n_atoms is None:
        raise UsageError("--n-atoms is required")
    spec = SqueezeSpec(args.r, args.delta if args.delta is not None else 0.0)
    if args.model == "single":
        if args.x is None:
            raise UsageError("--x is required for the single model")
        if args.y1 is not None or args.y2 is not None:
            raise UsageError("--y1/--y2 apply to the double model only")
        return sl.SingleLambdaParams(args.x, args.n_atoms), spec
    if args.y1 is None or args.y2 is None:
        raise UsageError("--y1 and --y2 are required for the double model")
    if args.x is not None:
        raise UsageError("--x applies to the single model only")
    return dl.DoubleLambdaParams(args.y1, args.y2, args.n_atoms), spec


def cmd_report(args) -> int:
    _apply_config(args)
    params, spec = _point(args)
    report = validation.closed_form_report(params, spec)
    if args.format == "json":
        text = json.dumps({"model": args.model, **report.as_dict()}, indent=1) + "\n"
    else:
        columns = sl.CSV_COLUMNS if args.model == "single" else dl.CSV_COLUMNS
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        writer.writerow([f"{v:.17g}" for v in report.csv_row()])
        text = buf.getvalue()
    _emit(text, args.out)
    return 0


def _scan_grid(args):
    """Resolve the grid and the job (quantities or criterion) from preset, file or flags."""
    quantities = list(args.quantity or [])
    criterion = args.criterion
    if args.preset:
        if args.grid or args.axis:
            raise UsageError("--preset cannot be combined with --grid or --axis")
        preset = PRESETS[args.preset]
        if not quantities and criterion is None:
            quantities, criterion = list(preset.quantities), preset.criterion
        return preset.grid, quantities, criterion
    if args.grid:
        try:
            values = parse_key_values(args.grid.read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read grid: {exc}") from None
        grid, rest = grid_from_mapping(values)
        if "quantity" in rest and not quantities:
            quantities = rest.pop("quantity").split()
        if "criterion" in rest and criterion is None:
            criterion = rest.pop("criterion")
        rest.pop("quantity", None)
        rest.pop("criterion", None)
        if rest:
            raise UsageError(f"unknown grid keys: {', '.join(sorted(rest))}")
        return grid, quantities, criterion
    if not args.axis:
        raise UsageError("scan needs --preset, --grid or at least one --axis")
    if args.model is None:
        raise UsageError("--model is required")
    fixed = {k: getattr(args, k) for k in ("x", "y1", "y2", "n_atoms", "r", "delta") if getattr(args, k) is not None}
    return GridSpec(args.model, tuple(args.axis), fixed), quantities, criterion


def cmd_scan(args) -> int:
    grid, quantities, criterion = _scan_grid(args)
    if quantities and criterion:
        raise UsageError("choose either --quantity or --criterion")
    if not quantities and criterion is None:
        raise UsageError("scan needs --quantity or --criterion")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    result = region(grid, criterion, args.workers) if criterion else sweep(grid, quantities, args.workers)
    text = {"csv": result.to_csv, "json": result.to_json, "svg": result.to_svg}[args.format]()
    _emit(text if text.endswith("\n") else text + "\n", args.out)
    return 0


def _parse_t_grid(text: str | None, schedule) -> np.ndarray:
    if text is None:
        return np.linspace(schedule.times[0], schedule.times[-1], 101)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("--t-grid must be 'start:stop:count'")
        return np.linspace(parse_float(parts[0]), parse_float(parts[1]), int(parts[2]))
    return np.array([parse_float(v) for v in text.split(",") if v.strip()])


def cmd_dynamics(args) -> int:
    try:
        schedule = read_schedule(args.schedule.read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read schedule: {exc}") from None
    traj = evolve(schedule, args.n_atoms, SqueezeSpec(args.r, args.delta), _parse_t_grid(args.t_grid, schedule))
    if args.format == "csv":
        text = traj.to_csv()
    else:
        text = json.dumps({"n_atoms": traj.n_atoms, "r": args.r, "delta": traj.spec.delta,
                           "rows": [row.as_dict() for row in traj.rows]}, indent=1) + "\n"
    _emit(text, args.out)
    return 0


def _label(params) -> str:
    if isinstance(params, sl.SingleLambdaParams):
        return f"single x={params.x:.4g} N={params.n_atoms:.4g}"
    return f"double y1={params.y1:.4g} y2={params.y2:.4g} N={params.n_atoms:.4g}"


def cmd_oracle_check(args) -> int:
    if args.samples < 0:
        raise UsageError("--samples must be >= 0")
    if args.cutoff is not None and args.cutoff < 2:
        raise UsageError("--cutoff must be >= 2")
    max_tail = args.max_tail
    if max_tail is None:
        max_tail = DEFAULT_MAX_TAIL if args.strict else ORACLE_MAX_TAIL
    if args.preset:
        points = validation.preset_points()
        if args.model != "both":
            kind = sl.SingleLambdaParams if args.model == "single" else dl.DoubleLambdaParams
            points = [p for p in points if isinstance(p[0], kind)]
    else:
        rng = np.random.default_rng(args.seed)
        points = []
        if args.model in ("single", "both"):
            points += [validation.random_single_params(rng, args.r_max) for _ in range(args.samples)]
        if args.model in ("double", "both"):
            points += [validation.random_double_params(rng, args.r_max) for _ in range(args.samples)]

    checks = [
        validation.check_point(
            params, spec, cutoff=args.cutoff, with_fock=not args.no_fock,
            max_tail=max_tail, tail_scaled=not args.strict,
        )
        for params, spec in points
    ]  # fmt: skip
    worst_g = max((c.gaussian_dev for c in checks), default=0.0)
    fock_devs = [c.fock_dev for c in checks if c.fock_dev is not None]
    worst_f = max(fock_devs, default=0.0)
    failures = sum(not c.ok for c in checks)

    if args.format == "json":
        rows = [
            {
                "point": _label(c.params), "r": c.spec.r, "delta": c.spec.delta,
                "gaussian_dev": c.gaussian_dev, "gaussian_field": c.gaussian_field,
                "fock_dev": c.fock_dev, "fock_field": c.fock_field, "tail": c.tail,
                "fock_tolerance": c.fock_tolerance, "fock_error": c.fock_error, "ok": c.ok,
            }
            for c in checks
        ]  # fmt: skip
        summary = {"points": len(checks), "failures": failures, "max_gaussian_dev": worst_g,
                   "max_fock_dev": worst_f, "gaussian_tolerance": validation.GAUSSIAN_TOL}
        text = json.dumps({"summary": summary, "rows": rows}, indent=1) + "\n"
    else:
        lines = [f"{'point':40s} {'r':>6s} {'delta':>7s} {'closed-gauss':>12s} {'gauss-fock':>11s} {'tol':>9s} {'tail':>9s}  status"]
        for c in checks:
            fd = "-" if c.fock_dev is None else f"{c.fock_dev:.2e}"
            tail = "-" if c.tail is None else f"{c.tail:.2e}"
            status = "ok" if c.ok else ("TRUNCATED" if c.fock_error else "FAIL")
            lines.append(
                f"{_label(c.params):40s} {c.spec.r:6.3f} {c.spec.delta:7.3f} {c.gaussian_dev:12.2e} "
                f"{fd:>11s} {c.fock_tolerance:9.1e} {tail:>9s}  {status}"
            )
        lines.append(
            f"max |closed - gaussian| = {worst_g:.3e} (tol {validation.GAUSSIAN_TOL:g}); "
            f"max |gaussian - fock| = {worst_f:.3e}; failures: {failures}/{len(checks)}"
        )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 1 if failures else 0


def cmd_presets(args) -> int:
    for name in sorted(PRESETS):
        p = PRESETS[name]
        job = f"region {p.criterion}" if p.criterion else "sweep " + ",".join(p.quantities)
        shape = "x".join(str(n) for n in p.grid.shape)
        print(f"{name:6s} {p.grid.model:6s} {job:22s} {shape:8s} {p.description}")
    return 0


COMMANDS = {
    "report": cmd_report,
    "scan": cmd_scan,
    "dynamics": cmd_dynamics,
    "oracle-check": cmd_oracle_check,
    "presets": cmd_presets,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
