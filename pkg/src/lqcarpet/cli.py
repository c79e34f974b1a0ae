"""Command-line front end.

Subcommands: validate, tau, spectrum, boxdim, oracle, compare.
Output is CSV (12 significant digits, '.' decimal) or a JSON mirror
via --format json. Exit codes: 0 ok, 1 domain/validation/tolerance
failure, 2 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .diagonal import box_dimension_diagonal
from .errors import (BudgetExceeded, CrossCheckError, FormatError,
                     GifsValidationError, NotDiagonalSystem)
from .general import box_dimension_general
from .model import check_rosc, load_model
from .oracles import box_count_spectrum, gamma_pressure
from .projections import tau_pair
from .spectrum import q_grid, spectrum_point, spectrum_rows

_EXIT_OK = 0
_EXIT_DOMAIN = 1
_EXIT_PARSE = 2


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _round12(value):
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def emit(rows, columns, fmt, out=None):
    """rows: list of dicts keyed by the column names."""
    out = out or sys.stdout
    if fmt == "json":
        payload = [{c: _round12(r.get(c)) for c in columns} for r in rows]
        print(json.dumps(payload, indent=2), file=out)
        return
    print(",".join(columns), file=out)
    for r in rows:
        print(",".join(_fmt(r.get(c)) for c in columns), file=out)


def _add_grid_args(p):
    p.add_argument("--q-min", type=float, default=0.0)
    p.add_argument("--q-max", type=float, default=3.0)
    p.add_argument("--q-step", type=float, default=0.25)


def _parse_q_list(text: str):
    try:
        qs = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ValueError(f"bad q list {text!r}")
    if not qs or any(q < 0 for q in qs):
        raise ValueError("q values must be nonnegative")
    return qs


def _parse_delta_range(text: str):
    try:
        j0, j1 = text.split("..")
        j0, j1 = int(j0), int(j1)
    except ValueError:
        raise ValueError(f"bad --deltas {text!r}, expected e.g. 4..10")
    if j0 > j1 or j0 < 1:
        raise ValueError("--deltas wants 1 <= j0 <= j1")
    return tuple(2.0 ** -j for j in range(j0, j1 + 1))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lqcarpet",
        description="Lq-spectra and box dimensions of planar box-like "
                    "graph-directed self-affine measures")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--threads", type=int, default=1)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a system file and "
                                        "report the open set condition")
    p.add_argument("path")

    p = sub.add_parser("tau", help="projection spectra over a q grid")
    p.add_argument("path")
    _add_grid_args(p)

    p = sub.add_parser("spectrum", help="closed-form spectrum over a q grid")
    p.add_argument("path")
    _add_grid_args(p)
    p.add_argument("--engine", choices=("auto", "diagonal", "general"),
                   default="auto")
    p.add_argument("--cross-check", action="store_true",
                   help="on all-diagonal systems, run both engines and "
                        "require agreement to 1e-8")

    p = sub.add_parser("boxdim", help="box dimension of the attractors")
    p.add_argument("path")
    p.add_argument("--verify", action="store_true",
                   help="compare against the finite-depth pressure root")
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--tol", type=float, default=0.02)

    p = sub.add_parser("oracle", help="brute-force estimates")
    p.add_argument("path")
    p.add_argument("--q", default="0,2", help="comma-separated q list")
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--deltas", default="4..10",
                   help="dyadic ladder as j0..j1 for 2^-j")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertex", default=None)

    p = sub.add_parser("compare", help="closed form vs oracles, with "
                                       "tolerance gating")
    p.add_argument("path")
    p.add_argument("--q", default="0,2")
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--deltas", default="4..10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol-pressure", type=float, default=0.05)
    p.add_argument("--tol-box", type=float, default=0.1)
    return ap


def _cmd_validate(args) -> int:
    try:
        model = load_model(args.path)
    except GifsValidationError as exc:
        print("valid: no", file=sys.stdout)
        for v in exc.violations:
            print(f"violation: {v}")
        return _EXIT_DOMAIN
    report = check_rosc(model)
    print(f"vertices: {len(model.vertices)}")
    print(f"edges: {len(model.edges)}")
    print("valid: yes")
    print(f"rosc: {'pass' if report.passed else 'fail'}")
    for v, eid in report.containment_failures:
        print(f"rosc containment failure: vertex {v}, edge {eid}")
    for v, e1, e2 in report.overlap_pairs:
        print(f"rosc overlap: vertex {v}, edges {e1} and {e2}")
    if not report.passed:
        print("warning: spectra are still computed, but the closed forms "
              "are only guaranteed under the open set condition")
    return _EXIT_OK


def _cmd_tau(args, fmt, threads) -> int:
    model = load_model(args.path)
    qs = q_grid(args.q_min, args.q_max, args.q_step)
    rows = []
    for q in qs:
        tp = tau_pair(model, q)
        rows.append({"q": q, "tau_A": tp.tau_a, "tau_B": tp.tau_b, "t": tp.t})
    emit(rows, ("q", "tau_A", "tau_B", "t"), fmt)
    return _EXIT_OK


_SPECTRUM_COLUMNS = ("q", "tau_A", "tau_B", "t", "gamma_A", "gamma_B",
                     "hat_gamma", "gamma", "branch", "rosc")


def _point_row(pt) -> dict:
    return {"q": pt.q, "tau_A": pt.tau_a, "tau_B": pt.tau_b, "t": pt.t,
            "gamma_A": pt.gamma_a, "gamma_B": pt.gamma_b,
            "hat_gamma": pt.hat_gamma, "gamma": pt.gamma,
            "branch": pt.branch, "rosc": pt.rosc}


def _cmd_spectrum(args, fmt, threads) -> int:
    model = load_model(args.path)
    qs = q_grid(args.q_min, args.q_max, args.q_step)
    rows = spectrum_rows(model, qs, engine=args.engine, threads=threads)
    if args.cross_check and model.is_diagonal:
        other = "general" if args.engine != "general" else "diagonal"
        twin = spectrum_rows(model, qs, engine=other, threads=threads)
        for r1, r2 in zip(rows, twin):
            if abs(r1.gamma - r2.gamma) > 1e-8:
                print(f"cross-check failure at q={r1.q}: "
                      f"{r1.gamma!r} vs {r2.gamma!r}", file=sys.stderr)
                return _EXIT_DOMAIN
    emit([_point_row(pt) for pt in rows], _SPECTRUM_COLUMNS, fmt)
    return _EXIT_OK


def _cmd_boxdim(args, fmt, threads) -> int:
    model = load_model(args.path)
    if model.is_diagonal:
        dim, branch = box_dimension_diagonal(model), "max{gamma_A,gamma_B}"
    else:
        dim, branch = box_dimension_general(model), "hat_gamma(0)"
    row = {"dim_B": dim, "branch": branch}
    columns = ["dim_B", "branch"]
    status = _EXIT_OK
    if args.verify:
        tau = tau_pair(model, 0.0)
        oracle = gamma_pressure(model, tau, 0.0, args.depth)
        row["oracle_estimate"] = oracle.estimate
        row["abs_diff"] = abs(oracle.estimate - dim)
        columns += ["oracle_estimate", "abs_diff"]
        if row["abs_diff"] > args.tol:
            status = _EXIT_DOMAIN
    emit([row], columns, fmt)
    return status


def _cmd_oracle(args, fmt, threads) -> int:
    model = load_model(args.path)
    qs = _parse_q_list(args.q)
    deltas = _parse_delta_range(args.deltas)
    vertex = args.vertex or model.vertices[0]
    if vertex not in model.vertex_index:
        raise FormatError(f"unknown vertex {vertex!r}")
    box = box_count_spectrum(model, vertex, qs, deltas=deltas,
                             n_samples=args.samples, seed=args.seed)
    rows = []
    for q in qs:
        tau = tau_pair(model, q)
        pb = gamma_pressure(model, tau, q, args.depth)
        rows.append({"q": q, "pressure_estimate": pb.estimate,
                     "pressure_lower": pb.lower, "pressure_upper": pb.upper,
                     "box_slope": box[q].slope})
    emit(rows, ("q", "pressure_estimate", "pressure_lower",
                "pressure_upper", "box_slope"), fmt)
    return _EXIT_OK


def _cmd_compare(args, fmt, threads) -> int:
    model = load_model(args.path)
    qs = _parse_q_list(args.q)
    deltas = _parse_delta_range(args.deltas)
    vertex = model.vertices[0]
    box = box_count_spectrum(model, vertex, qs, deltas=deltas,
                             n_samples=args.samples, seed=args.seed)
    rows, ok = [], True
    for q in qs:
        pt = spectrum_point(model, q)
        tau = tau_pair(model, q)
        pb = gamma_pressure(model, tau, q, args.depth)
        diff_p = abs(pt.gamma - pb.estimate)
        diff_b = abs(pt.gamma - box[q].slope)
        ok = ok and diff_p <= args.tol_pressure and diff_b <= args.tol_box
        rows.append({"q": q, "gamma_closed": pt.gamma,
                     "gamma_pressure": pb.estimate,
                     "box_count_slope": box[q].slope,
                     "diff_pressure": diff_p, "diff_box": diff_b})
    emit(rows, ("q", "gamma_closed", "gamma_pressure", "box_count_slope",
                "diff_pressure", "diff_box"), fmt)
    return _EXIT_OK if ok else _EXIT_DOMAIN


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    handlers = {"validate": lambda: _cmd_validate(args),
                "tau": lambda: _cmd_tau(args, args.format, args.threads),
                "spectrum": lambda: _cmd_spectrum(args, args.format,
                                                  args.threads),
                "boxdim": lambda: _cmd_boxdim(args, args.format,
                                              args.threads),
                "oracle": lambda: _cmd_oracle(args, args.format,
                                              args.threads),
                "compare": lambda: _cmd_compare(args, args.format,
                                                args.threads)}
    try:
        return handlers[args.command]()
    except (FormatError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_PARSE
    except (GifsValidationError, NotDiagonalSystem, CrossCheckError,
            BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
