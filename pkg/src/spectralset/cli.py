"""Command-line front end: ``spectralset {range,bounds,conjecture,verify}``.

Exit codes: 0 ok, 2 bad input, 3 non-smooth boundary, 4 pipeline stage failure.
"""
import argparse
import csv
import io as _io
import json
import os
import sys
import warnings

from . import acceptance
from .bounds import assemble_report
from .core import DEFAULT_TOL, Tolerances
from .errors import (ContractError, DomainError, InputError, NonSmoothBoundary,
                     SpectralSetError, StageError)
from .geometry import boundary_mesh, farthest_point_modulus, min_radius_of_curvature, perimeter
from .io import (atomic_writer, dumps, matrix_hash, read_matrix, write_boundary_csv,
                 write_boundary_rows)
from .ranges import QParameter, numrange_body, qrange_body
from .search import ENSEMBLE_KINDS, conjecture_trial, ensembles

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NONSMOOTH = 3
EXIT_STAGE = 4
DEFAULT_QS = (0.6, 0.8, 0.9, 1.0)


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _q_list(s):
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad q list {s!r}") from None


def _omega(s):
    """numrange | qrange | disk:cx,cy,r | disk:c,r (real centre)."""
    if s in ("numrange", "qrange"):
        return s
    if s.startswith("disk:"):
        try:
            vals = [float(x) for x in s[5:].split(",")]
        except ValueError:
            vals = []
        if len(vals) == 3:
            return ("disk", complex(vals[0], vals[1]), vals[2])
        if len(vals) == 2:
            return ("disk", complex(vals[0]), vals[1])
    raise argparse.ArgumentTypeError(f"expected numrange, qrange or disk:cx,cy,r; got {s!r}")


def _common(p, grid=True):
    if grid:
        p.add_argument("--grid", type=int, default=512, help="boundary nodes (power of two, >= 16)")
        p.add_argument("--fourier-k", type=int, default=64, help="support-function harmonics")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=_positive_int, default=32)
    p.add_argument("--out", help="output path")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    for name, default in DEFAULT_TOL.as_dict().items():
        p.add_argument("--" + name.replace("_", "-"), type=float, default=default)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spectralset",
        description="Spectral-set constants from numerical ranges and double-layer potentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("range", help="boundary of W(A) (and of Omega_q) as CSV plus a summary")
    p.add_argument("--matrix", required=True, help="matrix JSON {n, re, im}")
    p.add_argument("--q", type=float, help="|q| in (0, 1]")
    _common(p)

    p = sub.add_parser("bounds", help="every spectral-constant bound as JSON")
    p.add_argument("--matrix", required=True)
    p.add_argument("--q", type=float)
    p.add_argument("--omega", type=_omega, default="numrange",
                   help="numrange (default), qrange, or disk:cx,cy,r")
    _common(p)

    p = sub.add_parser("conjecture", help="search for ratios above the conjectured constant")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix")
    src.add_argument("--ensemble", choices=ENSEMBLE_KINDS)
    p.add_argument("--n", type=_positive_int, default=3)
    p.add_argument("--trials", type=_positive_int, default=1)
    p.add_argument("--q", type=_q_list, default=list(DEFAULT_QS), help="comma-separated |q| values")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--findings", help="JSONL file receiving violations")
    p.add_argument("--log-all", action="store_true", help="record every trial in --findings")
    _common(p)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")],
                   help="comma-separated criterion numbers")
    p.add_argument("--findings", help="JSONL file for sweep violations")
    return parser


def _tolerances(args):
    return Tolerances(args.eig_tol, args.quad_tol, args.psd_tol, args.curvature_tol)


def _check_grid(args):
    g = args.grid
    if g < 16 or g & (g - 1):
        raise InputError(f"--grid must be a power of two >= 16, got {g}")
    k = getattr(args, "fourier_k", None)
    if k is not None and not 1 <= k < g // 2:
        raise InputError(f"--fourier-k must satisfy 1 <= k < grid/2 = {g // 2}, got {k}")


def _emit(text, out):
    if out:
        with atomic_writer(out) as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _body_summary(body, grid, tol):
    return {
        "perimeter": perimeter(body),
        "w_omega": farthest_point_modulus(body),
        "min_rho": min_radius_of_curvature(body, tol),
        "center": [body.steiner_point().real, body.steiner_point().imag],
        "grid_n": grid,
    }


def cmd_range(args):
    _check_grid(args)
    tol = _tolerances(args)
    A = read_matrix(args.matrix)
    bodies = {"numrange": numrange_body(A, args.grid, args.fourier_k, tol)}
    if args.q is not None:
        q = QParameter(args.q)
        bodies["qrange"] = qrange_body(A, q, args.grid, args.fourier_k, args.restarts,
                                       args.seed, tol)
    summary = {"matrix_hash": matrix_hash(A), "q_abs": args.q}
    meshes = {}
    for name, body in bodies.items():
        meshes[name] = boundary_mesh(body, args.grid, tol)
        summary[name] = _body_summary(body, args.grid, tol)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name, mesh in meshes.items():
            write_boundary_csv(mesh, os.path.join(args.out, f"{name}.csv"))
        with atomic_writer(os.path.join(args.out, "summary.json")) as fh:
            fh.write(dumps(summary))
    if args.format == "csv":
        m = meshes.get("qrange", meshes["numrange"]) if args.out is None else None
        if m is not None:
            write_boundary_rows(m, sys.stdout)
            return EXIT_OK
    sys.stdout.write(dumps(summary))
    return EXIT_OK


def cmd_bounds(args):
    _check_grid(args)
    tol = _tolerances(args)
    A = read_matrix(args.matrix)
    rep = assemble_report(A, args.q, args.omega, args.grid, args.fourier_k, args.seed, tol,
                          args.restarts).to_dict()
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        for k, v in rep.items():
            if k != "meta":
                w.writerow([k, "" if v is None else f"{v:.17g}"])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(dumps(rep), args.out)
    return EXIT_OK


def cmd_conjecture(args):
    _check_grid(args)
    tol = _tolerances(args)
    if args.degree < 1:
        raise InputError("--degree must be >= 1 for the ratio search")
    qs = [QParameter(q) for q in args.q]
    if args.matrix:
        jobs = [(args.seed, read_matrix(args.matrix))]
    else:
        jobs = [(args.seed + i, ensembles(args.ensemble, args.n, args.seed + i))
                for i in range(args.trials)]
    per_q = {f"{q.q_abs:g}": {"bound": None, "max_ratio": None, "trials": 0, "violations": 0,
                              "skipped_nonsmooth": 0} for q in qs}
    rows = []
    for seed, A in jobs:
        for q in qs:
            slot = per_q[f"{q.q_abs:g}"]
            try:
                tr = conjecture_trial(A, q, args.degree, args.restarts, seed, args.grid,
                                      args.fourier_k, tol, args.findings, args.log_all)
            except NonSmoothBoundary as exc:
                slot["skipped_nonsmooth"] += 1
                rows.append({"seed": seed, "q_abs": q.q_abs, "skipped": str(exc)})
                continue
            slot["bound"] = tr.bound
            slot["trials"] += 1
            slot["violations"] += int(tr.violation)
            if slot["max_ratio"] is None or tr.max_ratio > slot["max_ratio"]:
                slot["max_ratio"] = tr.max_ratio
            rows.append({"seed": seed, "q_abs": q.q_abs, "matrix_hash": tr.result.matrix_hash,
                         "ratio": tr.max_ratio, "bound": tr.bound, "violation": tr.violation})
    summary = {
        "source": args.ensemble or "matrix",
        "n": int(jobs[0][1].shape[0]),
        "degree": args.degree,
        "restarts": args.restarts,
        "seed": args.seed,
        "per_q": per_q,
        "violations": sum(v["violations"] for v in per_q.values()),
        "trials": rows,
    }
    _emit(dumps(summary), args.out)
    return EXIT_OK


def cmd_verify(args):
    if args.grid < 16 or args.grid & (args.grid - 1):
        raise InputError(f"--grid must be a power of two >= 16, got {args.grid}")
    if args.only and not set(args.only) <= set(acceptance.CRITERIA):
        raise InputError(f"--only takes criterion numbers 1..{len(acceptance.CRITERIA)}")
    rows = acceptance.run(args.only, args.grid, args.seed, args.findings,
                          echo=lambda s: print(s, flush=True))
    failed = sum(not r.passed for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} criteria passed")
    return EXIT_OK if failed == 0 else 1


COMMANDS = {"range": cmd_range, "bounds": cmd_bounds, "conjecture": cmd_conjecture,
            "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[args.command](args)
    except NonSmoothBoundary as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONSMOOTH
    except StageError as exc:
        if isinstance(exc.cause, NonSmoothBoundary):
            print(f"error: {exc.cause}", file=sys.stderr)
            return EXIT_NONSMOOTH
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except (InputError, DomainError, ContractError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpectralSetError as exc:
        print(f"error: [{type(exc).__name__}] {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
