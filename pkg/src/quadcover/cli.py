"""``quadcover`` command-line tool.

Subcommands ``ellipse``, ``altitude``, ``sweep`` and ``report`` all take a
scenario via ``--config`` (a TOML path or a bundled scenario name) and
write to ``--out`` or stdout.

Exit status: 0 success, 1 other package error, 2 usage, 3 parse error,
4 validation error, 5 geometry error, 6 empty feasible set.
"""

import argparse
import csv
import dataclasses
import io
import json
import sys

import numpy as np

from . import channel, energy, report
from .errors import (EmptyFeasibleSet, GeometryError, NonPositiveRate, ParseError,
                     QuadcoverError, ValidationError)
from .scenario import load_scenario

SWEEP_HEADER = ("H_m", "pl_max_db", "snr_min_db", "energy_J", "psi_deg",
                "theta_deg", "phi_deg", "x0_m", "d_m", "p_los")

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2
EXIT_PARSE, EXIT_VALIDATION, EXIT_GEOMETRY, EXIT_INFEASIBLE = 3, 4, 5, 6


def _scenario(args):
    sc = load_scenario(args.config)
    if args.env is not None and args.env != "custom":
        sc = sc.with_environment(channel.environment(args.env))
    elif args.env == "custom" and not sc.custom_environment:
        raise ValidationError("environment", "--env custom needs custom parameters "
                                             "in the scenario's [environment] section")
    lo = sc.optimizer.h_min if getattr(args, "h_min", None) is None else args.h_min
    hi = sc.optimizer.h_max if getattr(args, "h_max", None) is None else args.h_max
    if (lo, hi) != (sc.optimizer.h_min, sc.optimizer.h_max):
        opt = dataclasses.replace(sc.optimizer, h_min=lo, h_max=hi)
        sc = dataclasses.replace(sc, optimizer=opt)
    return sc


def _json(obj) -> str:
    return json.dumps(report.clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}{k}.")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def _key_value_csv(obj) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    for k, v in _flatten(report.clean(obj)):
        w.writerow((k, "" if v is None else repr(v) if isinstance(v, float) else v))
    return buf.getvalue()


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_ellipse(args):
    sc = _scenario(args)
    fit = report.fit_ellipse(sc.quadrilateral, args.mode)
    body = {"mode": args.mode, "scenario": sc.name,
            **report.ellipse_section(sc.quadrilateral, fit)}
    return _json(body) if args.format == "json" else _key_value_csv(body)


def cmd_altitude(args):
    sc = _scenario(args)
    fit = report.fit_ellipse(sc.quadrilateral, args.mode)
    body = {"mode": args.mode, "scenario": sc.name,
            **report.altitude_section(sc, fit, args.objective)}
    return _json(body) if args.format == "json" else _key_value_csv(body)


def sweep_rows(sc, a, b, hs):
    rows = []
    for h in hs:
        g = report.geometry_at(a, b, h, sc.link, sc.environment)
        try:
            e = energy.total_energy(a, b, h, sc.link, sc.environment, sc.propulsion,
                                    sc.mission, sc.transit_model)
        except NonPositiveRate:
            e = None
        rows.append((h, g["pl_max_db"], g["snr_min_db"], e, g["psi_deg"], g["theta_deg"],
                     g["phi_deg"], g["x0_m"], g["d_m"], g["p_los"]))
    return rows


def cmd_sweep(args):
    sc = _scenario(args)
    if args.steps < 2:
        raise ValidationError("steps", "need at least 2 steps")
    lo, hi = sc.optimizer.h_min, sc.optimizer.h_max
    fit = report.fit_ellipse(sc.quadrilateral, args.mode)
    hs = [float(h) for h in np.linspace(lo, hi, args.steps)]
    rows = sweep_rows(sc, fit.ellipse.a, fit.ellipse.b, hs)

    column = {"pathloss": 1, "snr": 2, "energy": 3}[args.objective]
    vals = [r[column] for r in rows if r[column] is not None]
    if vals:
        best = max(vals) if args.objective == "snr" else min(vals)
        h_best = next(r[0] for r in rows if r[column] == best)
        print(f"{args.objective}: best sample at H = {h_best:.6g} m", file=sys.stderr)

    if args.format == "json":
        return _json([dict(zip(SWEEP_HEADER, r)) for r in rows])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow(["" if v is None else repr(float(v)) for v in r])
    return buf.getvalue()


def cmd_report(args):
    sc = _scenario(args)
    rep = report.build_report(sc)
    if args.format == "text":
        return report.render_text(rep)
    if args.format == "csv":
        return _key_value_csv(rep)
    return _json(rep)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quadcover",
        description="Elliptical UAV footprints for convex quadrilaterals and optimal altitude.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "csv"), default="json"):
        p.add_argument("--config", default="case_study",
                       help="scenario TOML file or bundled name (default: case_study)")
        p.add_argument("--env", default=None,
                       help="environment preset, or 'custom' for the scenario's own parameters")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=formats, default=default)

    def mode(p):
        p.add_argument("--mode", choices=report.MODES, default="inscribed")

    def bounds(p):
        p.add_argument("--h-min", type=float, default=None, dest="h_min")
        p.add_argument("--h-max", type=float, default=None, dest="h_max")

    p = sub.add_parser("ellipse", help="inscribed or circumscribed footprint ellipse")
    common(p)
    mode(p)
    p.set_defaults(func=cmd_ellipse)

    p = sub.add_parser("altitude", help="optimal altitude for one objective")
    common(p)
    mode(p)
    bounds(p)
    p.add_argument("--objective", choices=report.OBJECTIVES, default="pathloss")
    p.set_defaults(func=cmd_altitude)

    p = sub.add_parser("sweep", help="CSV of channel, energy and geometry versus altitude")
    common(p, default="csv")
    mode(p)
    bounds(p)
    p.add_argument("--objective", choices=report.OBJECTIVES, default="pathloss")
    p.add_argument("--steps", type=int, default=100)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="full case-study reproduction")
    common(p, formats=("json", "text", "csv"))
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except QuadcoverError as exc:
        code, kind = _classify(exc)
        print(f"quadcover: {kind}: {exc}", file=sys.stderr)
        return code
    _emit(text, args.out)
    return EXIT_OK


def _classify(exc):
    if isinstance(exc, ParseError):
        return EXIT_PARSE, "parse error"
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION, "invalid configuration"
    if isinstance(exc, GeometryError):
        return EXIT_GEOMETRY, "geometry error"
    if isinstance(exc, EmptyFeasibleSet):
        return EXIT_INFEASIBLE, "no feasible altitude"
    return EXIT_ERROR, "error"


if __name__ == "__main__":
    sys.exit(main())
