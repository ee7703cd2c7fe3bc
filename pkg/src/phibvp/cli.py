"""Command-line front end.

    phibvp curve   sample F(rho) to CSV (``--figure 1|2`` for the reference grids)
    phibvp solve   classify, solve, reconstruct and cross-check one problem (JSON)
    phibvp verify  run the verification matrix; exit 0 iff every check passes
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
from typing import Any, Iterator, TextIO

import numpy as np

from . import __version__
from .errors import NoBracketError, PhiBVPError
from .oracle import shooting_solve
from .problem import BoundaryCondition, make_problem
from .profile import reconstruct
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .solver import classify_existence, solve_reduced
from .timemap import F_curve, F_limits, F_quotient, rho_domain

SCHEMA_VERSION = 1

# gamma values and rho grids of the two reference plots (a+ = 1, a- = 2, p = 2)
FIGURE_SETS = {
    1: ((-0.4, -0.2, 0.0, 0.2, 0.8),
        np.concatenate([[0.0], np.round(np.arange(1, 11) * 0.004, 12), np.round(np.arange(2, 50) * 0.04, 12), [2.0]])),
    2: ((-1.5, -1.6, -1.8, -2.0, -3.0), np.concatenate([[2.0], np.arange(3.0, 21.0)])),
}


def _fmt(v: float) -> str:
    return "%.17g" % v


@contextlib.contextmanager
def _open_out(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _quad_from(args) -> QuadratureConfig:
    d = DEFAULT_QUADRATURE
    return QuadratureConfig(
        args.abs_tol if args.abs_tol is not None else d.abs_tol,
        args.rel_tol if args.rel_tol is not None else d.rel_tol,
        args.max_levels if args.max_levels is not None else d.max_levels,
    )


# -- curve ----------------------------------------------------------------

def _figure_rows(fig: int, q: QuadratureConfig, workers: int | None):
    gammas, grid = FIGURE_SETS[fig]
    for gamma in gammas:
        spec = make_problem(gamma, 1.0, 2.0, 1.0, 3.0)
        at_ratio, far = F_limits(spec, q)
        dom = rho_domain(spec)
        inner = [r for r in grid if dom.interior(r)]
        vals = dict(zip(inner, F_curve(inner, spec, q, workers)))
        for r in grid:
            if r in vals:
                yield r, vals[r], gamma, 0
            elif r == spec.weight.ratio:
                yield r, at_ratio, gamma, 1
            elif r == 0.0:
                yield r, far, gamma, 1


def cmd_curve(args) -> int:
    q = _quad_from(args)
    with _open_out(args.output) as out:
        w = csv.writer(out, lineterminator="\n")
        if args.figure:
            w.writerow(["rho", "F", "gamma", "limit"])
            for r, f, g, lim in _figure_rows(args.figure, q, args.workers):
                w.writerow([_fmt(r), _fmt(f), _fmt(g), lim])
            return 0
        if args.gamma is None:
            raise SystemExit("curve: --gamma is required unless --figure is given")
        spec = make_problem(args.gamma, args.a_plus, args.a_minus, 1.0, 2.0, p=args.p)
        dom = rho_domain(spec)
        # defaults stay strictly inside the open domain
        if dom.lower > 0:
            lo_d, hi_d = dom.lower * (1 + 1e-6), 10 * dom.lower
        else:
            lo_d, hi_d = 1e-6 * dom.upper, dom.upper * (1 - 1e-6)
        lo = args.rho_min if args.rho_min is not None else lo_d
        hi = args.rho_max if args.rho_max is not None else hi_d
        rhos = np.geomspace(lo, hi, args.n) if args.log else np.linspace(lo, hi, args.n)
        w.writerow(["rho", "F"])
        status = 0
        for r in rhos:
            try:
                f = F_quotient(float(r), spec, q)
            except PhiBVPError as exc:
                print(f"rho={_fmt(r)}: {exc.code}: {exc}", file=sys.stderr)
                f = float("nan")
                status = 1
            w.writerow([_fmt(r), _fmt(f)])
    return status


# -- solve ----------------------------------------------------------------

def _error(exc: PhiBVPError) -> dict[str, Any]:
    return {"code": exc.code, "message": str(exc)}


def _oracle_alpha(spec, alpha: float) -> float:
    """Shooting solution near ``alpha``; the bracket widens until the residual changes sign."""
    last = None
    for width in (1e-4, 1e-3, 1e-2, 0.1, 0.5):
        bracket = (alpha * (1.0 - width), alpha * (1.0 + width))
        try:
            return shooting_solve(spec, bracket=bracket)
        except NoBracketError as exc:
            last = exc
    raise last


def build_report(args) -> dict[str, Any]:
    q = _quad_from(args)
    spec = make_problem(args.gamma, args.a_plus, args.a_minus, args.tau, args.T, p=args.p,
                        kernel=args.kernel, bc=args.bc)
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "input": {
            "gamma": args.gamma, "p": args.p, "kernel": spec.kernel.kind.value,
            "a_plus": args.a_plus, "a_minus": args.a_minus, "tau": args.tau, "T": args.T,
            "bc": spec.bc.value,
        },
    }
    verdict = classify_existence(spec, q)
    report["verdict"] = verdict.to_dict()
    try:
        sol = solve_reduced(spec, q)
    except PhiBVPError as exc:
        report["error"] = _error(exc)
        return report
    report["reduced_solution"] = sol.to_dict()
    prof = reconstruct(sol, spec, args.n_points, q)
    report["profile"] = prof.summary()
    if args.profile_csv:
        with open(args.profile_csv, "w", encoding="utf-8", newline="") as fh:
            prof.write_csv(fh)
    if not args.no_oracle:
        try:
            alpha_o = _oracle_alpha(spec, sol.alpha)
            report["oracle"] = {
                "alpha": alpha_o,
                "alpha_relative_delta": abs(alpha_o - sol.alpha) / sol.alpha,
            }
        except PhiBVPError as exc:
            report["oracle"] = {"error": _error(exc)}
    return report


def cmd_solve(args) -> int:
    report = build_report(args)
    with _open_out(args.output) as out:
        json.dump(report, out, sort_keys=True, indent=2, ensure_ascii=False)
        out.write("\n")
    return 0 if "reduced_solution" in report else 1


# -- verify ---------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import run_all

    only = {int(v) for v in args.only.split(",")} if args.only else None
    results = run_all(args.tol_scale, only)
    first = None
    for r in results:
        print(r.line())
        if args.verbose:
            for d in r.details:
                print(f"      {d}")
        if not r.passed and first is None:
            first = r
    if first is not None:
        print(f"first failing check: criterion {first.number} ({first.name})")
        return 1
    print(f"all {len(results)} checks passed")
    return 0


# -- parser ---------------------------------------------------------------

def _add_quad(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("quadrature")
    g.add_argument("--abs-tol", type=float)
    g.add_argument("--rel-tol", type=float)
    g.add_argument("--max-levels", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="phibvp", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curve", help="sample F(rho) to CSV")
    c.add_argument("--figure", type=int, choices=(1, 2), help="reference grids and gamma sets")
    c.add_argument("--gamma", type=float)
    c.add_argument("--p", type=float, default=2.0)
    c.add_argument("--a-plus", type=float, default=1.0)
    c.add_argument("--a-minus", type=float, default=2.0)
    c.add_argument("--rho-min", type=float)
    c.add_argument("--rho-max", type=float)
    c.add_argument("--n", type=int, default=101)
    c.add_argument("--log", action="store_true", help="geometric rho spacing")
    c.add_argument("--workers", type=int, default=None)
    c.add_argument("-o", "--output")
    _add_quad(c)
    c.set_defaults(func=cmd_curve)

    s = sub.add_parser("solve", help="solve one problem and print a JSON report")
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--kernel", choices=("linear", "plaplacian", "minkowski"))
    s.add_argument("--a-plus", type=float, required=True)
    s.add_argument("--a-minus", type=float, required=True)
    s.add_argument("--tau", type=float, required=True)
    s.add_argument("--T", type=float, required=True)
    s.add_argument("--bc", choices=[b.value for b in BoundaryCondition], default="neumann")
    s.add_argument("--n-points", type=int, default=1001)
    s.add_argument("--no-oracle", action="store_true")
    s.add_argument("--profile-csv")
    s.add_argument("-o", "--output")
    _add_quad(s)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run the verification matrix")
    v.add_argument("--tol-scale", "--tol", dest="tol_scale", type=float, default=1.0,
                   help="multiply every tolerance (values < 1 tighten)")
    v.add_argument("--only", help="comma-separated criterion numbers")
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PhiBVPError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
