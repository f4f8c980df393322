"""Command-line front end: ``odelta <command> ...``.

JSON goes to stdout with a ``schema_version`` field and 17 significant
digits.  A flat JSON config file may supply any flag; explicit flags win.
Exit codes: 0 success, 1 usage or input error, 2 no bracket / root found,
3 a verification suite failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import gauss, surface, verify
from .periods import FamilyParams, edge_periods, q_value, rho_from_periods
from .solver import (
    BracketError,
    RootNotFoundError,
    boundary_curve,
    boundary_residual,
    solve_odelta,
    solve_tstar,
)

SCHEMA_VERSION = 1
SWEEP_HEADER = ["a", "b", "t", "rho", "residual", "iterations", "status"]
BOUNDARY_HEADER = ["a", "t", "residual"]

EXIT_OK, EXIT_USAGE, EXIT_BRACKET, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    return format(float(x), ".17g")


def to_json(obj, indent=0) -> str:
    """JSON text with every finite float written to 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        return "[" + ", ".join(to_json(v, indent + 1) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def dump_json(payload: dict, out=None):
    out = out or sys.stdout
    out.write(to_json({"schema_version": SCHEMA_VERSION, **payload}) + "\n")


def parse_grid(spec: str):
    """``lo:hi:n`` (inclusive linspace) or a comma list of numbers."""
    spec = str(spec)
    try:
        if ":" in spec:
            lo, hi, n = spec.split(":")
            n = int(n)
            if n < 2:
                raise UsageError(f"grid {spec!r} needs at least 2 points")
            return np.linspace(float(lo), float(hi), n).tolist()
        vals = [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {spec!r}: {exc}") from exc
    if not vals:
        raise UsageError(f"empty grid {spec!r}")
    return vals


def _report_dict(rep, note=None):
    p = rep.params
    d = {
        "a": p.a, "b": p.b, "t": p.t, "rho": p.rho,
        "residual_q": rep.residual_q, "residual_period": rep.residual_period,
        "bracket": list(rep.bracket), "iterations": rep.iterations,
        "warnings": list(rep.warnings),
    }
    if note:
        d["note"] = note
    return d


def cmd_solve(args):
    a, b, tol = args.a, args.b, args.tol
    if not tol > 0:
        raise UsageError("--tol must be positive")
    if a == b:
        if args.t is None:
            raise UsageError("a = b solves for every t; pass --t")
        FamilyParams(a, b, args.t, 1.0)  # validates the ordering 1 < a < t
        dump_json({"a": a, "b": b, "t": args.t, "rho": 1.0, "residual_q": abs(q_value(a, b, args.t)),
                   "note": "diagonal a = b: period conditions hold with rho = 1"})
        return EXIT_OK
    note = None
    swapped = a > b
    if swapped:
        a, b = b, a
        note = "swapped to a <= b; rho refers to the canonical order"
    try:
        rep = solve_odelta(a, b, tol)
    except BracketError as exc:
        dump_json({"a": a, "b": b, "error": str(exc),
                   "samples": [list(s) for s in exc.samples]})
        return EXIT_BRACKET
    dump_json(_report_dict(rep, note))
    return EXIT_OK


def _solve_row(ab):
    a, b, tol = ab
    if a == b:
        return [a, b, "", "", "", "", "skipped: diagonal"]
    lo, hi = min(a, b), max(a, b)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = solve_odelta(lo, hi, tol)
    except (ArithmeticError, ValueError) as exc:
        return [a, b, "", "", "", "", f"failed: {exc}"]
    rho = rep.params.rho if a <= b else 1.0 / rep.params.rho
    status = "ok" if a <= b else "ok (swapped)"
    return [a, b, rep.params.t, rho, rep.residual_q, rep.iterations, status]


def _jobs(args):
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("TPMS_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise UsageError(f"TPMS_JOBS must be an integer, got {env!r}") from exc
    return 1


def _write_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in r])
    if out in (None, "-"):
        sys.stdout.write(buf.getvalue())
        return
    try:
        Path(out).write_text(buf.getvalue())
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def cmd_sweep(args):
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    agrid, bgrid = parse_grid(args.a_grid), parse_grid(args.b_grid)
    tasks = [(a, b, args.tol) for a in agrid for b in bgrid]
    jobs = _jobs(args)
    if jobs == 1:
        rows = [_solve_row(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_solve_row, tasks))
    _write_csv(SWEEP_HEADER, rows, args.out)
    return EXIT_OK


def cmd_boundary(args):
    rows = []
    for a in parse_grid(args.a_grid):
        try:
            t = boundary_curve(a)
            rows.append([a, t, abs(boundary_residual(a, t))])
        except (RootNotFoundError, ValueError, ArithmeticError) as exc:
            rows.append([a, "", f"not found: {exc}"])
    _write_csv(BOUNDARY_HEADER, rows, args.out)
    return EXIT_OK


def cmd_tstar(args):
    a = solve_tstar()
    if args.json:
        dump_json({"a_star": a, "t_star": a * a, "m_star": a * a / (1 + a * a)})
    else:
        print(repr(a))
    return EXIT_OK


def cmd_gauss(args):
    p, swapped = FamilyParams.canonical(args.a, args.b, args.t, args.rho)
    cls, wit = gauss.antipodality_test(p)
    bv = gauss.branch_values(p)
    pts = [{"sign": s, "z": z, "point": bv.points[i]} for i, (s, z) in enumerate(gauss.LABELS)]
    pairs = [[f"{'+' if a[0] > 0 else '-'}G({a[1]})", f"{'+' if b[0] > 0 else '-'}G({b[1]})"]
             for a, b in gauss.pairs_by_label(bv)]
    payload = {
        "a": p.a, "b": p.b, "t": p.t, "rho": bv.rho_used,
        "classification": cls, "points": pts,
        "pair_residual": bv.pair_residual,
        "antipodal_pairs": pairs if cls == "meeks" else [],
        "rho4_candidates": [wit.rho4_from_unit, wit.rho4_from_t],
        "rho4_discrepancy": wit.discrepancy,
    }
    if swapped:
        payload["note"] = "swapped to a <= b, rho inverted"
    dump_json(payload)
    return EXIT_OK


def cmd_mesh(args):
    p, _ = FamilyParams.canonical(args.a, args.b, args.t, args.rho)
    if p.rho is None:
        # closes the first period condition; the second holds only where Q = 0
        p = p.with_rho(1.0 if p.a == p.b else rho_from_periods(edge_periods(p)))
    mesh = surface.fundamental_hexagon(p, args.resolution, args.theta)
    info = {"a": p.a, "b": p.b, "t": p.t, "theta": args.theta, "copies": 1}
    if args.copies == 8:
        try:
            mesh, box = surface.extend_to_lattice_cell(mesh)
        except surface.OffCenterError as exc:
            dump_json({**info, "error": str(exc), "dx": exc.dx, "dy": exc.dy})
            return EXIT_BRACKET
        info.update(copies=8, A=box.A, B=box.B, lattice=box.lattice,
                    weld_residual=box.weld_residual,
                    euler_characteristic=box.euler_characteristic)
    out = surface.export_mesh(mesh, args.out, args.format)
    dump_json({**info, "path": str(out), "vertices": len(mesh.vertices),
               "faces": len(mesh.faces)})
    return EXIT_OK


def cmd_verify(args):
    results = verify.run(args.suite)
    ok = True
    for r in results:
        ok &= r.passed
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: worst {r.worst:.3g} "
              f"(limit {r.limit:.0e}) {r.detail}")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser():
    p = _Parser(prog="odelta", description="Periods, solvers and meshes for oDelta TPMS.")
    p.add_argument("--config", help="flat JSON object of flag values")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p.commands = sub.choices

    s = sub.add_parser("solve", help="solve Q(a, b; t) = 0 for t")
    s.add_argument("a", type=float)
    s.add_argument("b", type=float)
    s.add_argument("--t", type=float, help="t for the diagonal a = b")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--json", action="store_true", help="JSON output (the default)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="solve over an (a, b) grid, CSV out")
    s.add_argument("--a-grid", required=True)
    s.add_argument("--b-grid", required=True)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--out", default="-")
    s.add_argument("--jobs", type=int)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("boundary", help="t on the oD boundary curve for each a")
    s.add_argument("--a-grid", required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_boundary)

    s = sub.add_parser("tstar", help="print a*")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_tstar)

    s = sub.add_parser("gauss", help="branched values and antipodality")
    s.add_argument("a", type=float)
    s.add_argument("b", type=float)
    s.add_argument("t", type=float)
    s.add_argument("--rho", type=float, default=1.0)
    s.set_defaults(func=cmd_gauss)

    s = sub.add_parser("mesh", help="export the hexagon or the 8-copy cell")
    s.add_argument("a", type=float)
    s.add_argument("b", type=float)
    s.add_argument("t", type=float)
    s.add_argument("--rho", type=float)
    s.add_argument("--copies", type=int, choices=(1, 8), default=1)
    s.add_argument("--theta", type=float, default=0.0)
    s.add_argument("--resolution", type=int, default=8)
    s.add_argument("--format", choices=("obj", "ply"))
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_mesh)

    s = sub.add_parser("verify", help="run the self-verification suites")
    s.add_argument("--suite", nargs="+", default=["all"],
                   choices=["all", *verify.SUITES])
    s.set_defaults(func=cmd_verify)
    return p


def _apply_config(parser, argv):
    """Parse argv with config values as defaults so explicit flags win."""
    argv = sys.argv[1:] if argv is None else list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    command = next((tok for tok in rest if tok in parser.commands), None)
    if not known.config or command is None:
        return parser.parse_args(argv)
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(cfg, dict) or any(isinstance(v, (dict, list)) for v in cfg.values()):
        raise UsageError("config must be a flat JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    sub = parser.commands[command]
    actions = {a.dest: a for a in sub._actions if a.option_strings and a.dest != "help"}
    unknown = set(cfg) - set(actions)
    if unknown:
        raise UsageError(f"unknown config keys for {command}: {sorted(unknown)}")
    for key in cfg:
        actions[key].required = False
    sub.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; report its status instead
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"odelta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"odelta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RootNotFoundError as exc:
        print(f"odelta: {exc}", file=sys.stderr)
        return EXIT_BRACKET
    except ValueError as exc:
        print(f"odelta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
