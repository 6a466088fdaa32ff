"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 certification
failure, 4 path error (continuation met a critical value).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .adjoint import hmr_eval
from .builtins import builtin
from .config import Tolerances
from .continuation import monodromy
from .errors import (
    FiberEscape,
    MatchingAmbiguity,
    NotRegularValue,
    NotSelfMap,
    PathThroughCriticalValue,
    PoleProximity,
    RatAdjointError,
)
from .hardy import HardyPoly, adjoint_oracle
from .rational import certify, critical_data
from .regularity import atlas_for, classify, decomposition_report, FORMS as DECOMP_FORMS
from .serialize import cjson, dumps, map_from_json, map_to_json, poly_from_json
from .verify import run_suites

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_CERT, EXIT_PATH = 0, 1, 2, 3, 4


class ParseFailure(Exception):
    pass


def parse_complex(text: str) -> complex:
    """'re,im' or a single real number."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ParseFailure(f"cannot parse complex number {text!r}; expected 're,im'")


def _read_text(spec: str, stdin) -> str:
    if spec == "-":
        return stdin.read()
    return Path(spec).read_text()


def load_map(spec: str | None, in_path: str | None, stdin=None):
    stdin = stdin or sys.stdin
    try:
        if in_path is not None:
            doc = json.loads(_read_text(in_path, stdin))
        elif spec is None:
            raise ParseFailure("no map given (builtin name, JSON file, inline JSON or '-')")
        elif spec.lstrip().startswith("{"):
            doc = json.loads(spec)
        elif spec == "-" or Path(spec).is_file():
            doc = json.loads(_read_text(spec, stdin))
        else:
            try:
                return builtin(spec)
            except (KeyError, ValueError) as exc:
                raise ParseFailure(f"unknown builtin or missing file {spec!r}") from exc
        return map_from_json(doc)
    except ParseFailure:
        raise
    except (OSError, ValueError, RatAdjointError) as exc:
        raise ParseFailure(str(exc)) from exc


def load_f(text: str) -> HardyPoly:
    try:
        if Path(text).is_file():
            text = Path(text).read_text()
        data = json.loads(text)
        if isinstance(data, dict):
            data = data.get("coeffs", data.get("f"))
        return HardyPoly(poly_from_json(data))
    except (OSError, ValueError, TypeError) as exc:
        raise ParseFailure(f"cannot parse f: {exc}") from exc


def parse_grid(spec: str) -> np.ndarray:
    """'NxR': N angles times R radii r_k = k/(R+1), ordered radius-major."""
    try:
        n, r = (int(p) for p in spec.lower().split("x"))
    except ValueError as exc:
        raise ParseFailure(f"grid must look like 'NxR', got {spec!r}") from exc
    if n < 1 or r < 1:
        raise ParseFailure("grid sizes must be positive")
    radii = np.arange(1, r + 1) / (r + 1)
    theta = 2 * np.pi * np.arange(n) / n
    return (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()


# ---------------------------------------------------------------------------
# commands

def cmd_analyze(phi, tol, args) -> tuple[dict, int]:
    rep = classify(phi, tol)
    cd = critical_data(phi, tol)
    out = {
        "map": map_to_json(phi),
        "degree": phi.degree,
        "phi_at_infinity": cjson(phi.at_infinity),
        "phi_at_zero": cjson(phi.at_zero),
        "critical_points": [cjson(p) for p in cd.critical_points],
        "critical_values": [cjson(v) for v in cd.critical_values],
        "class": rep.map_class.value,
        "boundary_contacts": rep.as_dict()["boundary_contacts"],
        "is_blaschke": rep.is_blaschke,
        "regularity": rep.as_dict(),
    }
    if args.decomposition:
        atlas = atlas_for(phi, rep, tol)
        out["decomposition"] = {
            form: decomposition_report(phi, form, tol, report=rep, atlas=atlas).as_dict() for form in DECOMP_FORMS
        }
    return out, EXIT_OK


def _eval_point(phi, f, z, form, tol) -> dict:
    row = {"z": cjson(z)}
    try:
        ev = hmr_eval(phi, f, z, form, tol)
    except (NotRegularValue, FiberEscape, PoleProximity) as exc:
        row.update(value=None, form_used=None, branch_terms=[], oracle_value=None, abs_err=None,
                   error=type(exc).__name__, message=str(exc))
        return row
    oracle = adjoint_oracle(phi, f, z)
    row.update(value=cjson(ev.value), form_used=ev.form_used,
               branch_terms=[cjson(t) for t in ev.branch_terms],
               oracle_value=cjson(oracle), abs_err=float(abs(ev.value - oracle)),
               flags=list(ev.condition_flags))
    return row


def cmd_eval(phi, tol, args) -> tuple[list, int]:
    f = load_f(args.f)
    pts = [parse_complex(z) for z in args.z or ()]
    if args.grid:
        pts.extend(complex(z) for z in parse_grid(args.grid))
    if not pts:
        raise ParseFailure("no evaluation points (use --grid or --z)")
    for z in pts:
        if abs(z) >= 1:
            raise ParseFailure(f"evaluation point {z} is not in the open unit disc")
    rows = [dict(index=i, **_eval_point(phi, f, z, args.form, tol)) for i, z in enumerate(pts)]
    ok = any(r["value"] is not None for r in rows)
    return rows, EXIT_OK if ok else EXIT_VERIFY


def cmd_verify(phi, tol, args) -> tuple[dict, int]:
    summary = run_suites(phi, trials=args.trials, seed=args.seed, tol=tol)
    return summary.as_dict(), EXIT_OK if summary.passed else EXIT_VERIFY


def cmd_monodromy(phi, tol, args) -> tuple[dict, int]:
    center = parse_complex(args.center)
    res = monodromy(phi.exterior, center, args.radius, args.steps, tol)
    return {
        "center": cjson(center),
        "radius": args.radius,
        "steps": args.steps,
        "permutation": list(res.permutation),
        "cycles": res.cycles,
        "is_identity": res.is_identity,
        "set_error": res.set_error,
        "base_fiber": [cjson(w) for w in res.base_fiber.points],
    }, EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "eval": cmd_eval, "verify": cmd_verify, "monodromy": cmd_monodromy}


# ---------------------------------------------------------------------------
# output

def _flat(v):
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, float) for x in v):
        return f"{v[0]!r},{v[1]!r}"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


def to_csv(payload) -> str:
    rows = payload if isinstance(payload, list) else [payload]
    keys = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _flat(r.get(k)) for k in keys})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("map", nargs="?", help="builtin name, JSON file, inline JSON, or '-' for stdin")
    common.add_argument("--in", dest="in_path", help="read the map JSON from this file")
    common.add_argument("--out", help="write output here instead of stdout")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="ratadjoint", description="Adjoints of rational composition operators on H^2.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common])
    a.add_argument("--decomposition", action="store_true", help="include operator decomposition reports")

    e = sub.add_parser("eval", parents=[common])
    e.add_argument("--f", required=True, help="coefficient JSON (ascending) or a file containing it")
    e.add_argument("--form", choices=["thm", "cor", "bs", "auto"], default="auto")
    e.add_argument("--grid", help="'NxR' polar grid: N angles, R radii k/(R+1)")
    e.add_argument("--z", action="append", help="explicit point 're,im' (repeatable)")

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--trials", type=int, default=100)

    m = sub.add_parser("monodromy", parents=[common])
    m.add_argument("--center", default="0,0")
    m.add_argument("--radius", type=float, default=0.5)
    m.add_argument("--steps", type=int, default=64)
    return p


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        tol = Tolerances.parse_overrides(args.tol)
        phi = load_map(args.map, args.in_path, stdin)
    except (ParseFailure, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    try:
        phi = certify(phi, tol)
    except NotSelfMap as exc:
        print(f"error: not a self-map of the unit disc: {exc}", file=stderr)
        return EXIT_CERT
    try:
        payload, code = COMMANDS[args.command](phi, tol, args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except (PathThroughCriticalValue, MatchingAmbiguity) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PATH
    text = to_csv(payload) if args.fmt == "csv" else dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
