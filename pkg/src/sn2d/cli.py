"""sn2d command line.

    sn2d solve --m 0 --out sol.csv
    sn2d branch --gamma 1 --lambda-min 1 --lambda-max 200 --points 50 --out branch.csv
    sn2d branch --invert --omega 1.0 --gamma 1
    sn2d hls --profile gaussian:lam=1,width=1 --profile table.csv
    sn2d oracle --lambda 46.03 --gamma 1
    sn2d reproduce --outdir repro/

Exit status: 0 success, 1 computational failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from sn2d import io
from sn2d.branch import (
    PAPER_APPENDIX,
    BranchConstants,
    branch_sweep,
    computed_constants,
    e0_of_lambda,
    lambdas_of_omega,
    omega_star,
)
from sn2d.errors import BadParamsError, Sn2dError


class UsageError(Exception):
    pass


def _non_negative_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sn2d", description="Bound states of the 2D Schrödinger-Newton system.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("solve", help="shoot for the universal solution")
    s.add_argument("--m", type=_non_negative_int, default=0, help="angular index")
    s.add_argument("--tol", type=_positive_float, default=1e-10, help="relative step tolerance")
    s.add_argument("--rmax", type=_positive_float, default=60.0, help="maximum integration radius")
    s.add_argument("--out", required=True, help="solution CSV (r,u,W,Wp); summary goes to <out>.json")

    b = sub.add_parser("branch", help="frequency/energy branch sweep or inversion")
    b.add_argument("--gamma", type=_positive_float, default=1.0)
    b.add_argument("--lambda-min", type=_positive_float)
    b.add_argument("--lambda-max", type=_positive_float)
    b.add_argument("--points", type=_non_negative_int, default=50)
    b.add_argument("--spacing", choices=("log", "linear"), default="log")
    b.add_argument("--invert", action="store_true", help="find particle numbers for --omega")
    b.add_argument("--omega", type=float)
    b.add_argument("--constants", choices=("computed", "paper"), default="computed")
    b.add_argument("--out", help="CSV output (default: stdout)")

    h = sub.add_parser("hls", help="sharp log-HLS check on radial profiles")
    h.add_argument("--profile", action="append", required=True,
                   help="CSV path with header r,u, or kind:key=val,... (gaussian, exponential, ground_state)")
    h.add_argument("--constants", choices=("computed", "paper"), default="computed")
    h.add_argument("--out", help="JSON output (default: stdout)")

    o = sub.add_parser("oracle", help="variational minimisation at fixed particle number")
    o.add_argument("--lambda", dest="lam", type=_positive_float, required=True)
    o.add_argument("--gamma", type=_positive_float, default=1.0)
    o.add_argument("--points", type=_non_negative_int, default=1024)
    o.add_argument("--out", help="JSON output (default: stdout)")

    r = sub.add_parser("reproduce", help="reproduce the reference constants and cross-checks")
    r.add_argument("--outdir", default="reproduce_out")
    return p


def _constants(name: str) -> BranchConstants:
    return PAPER_APPENDIX if name == "paper" else computed_constants()


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def parse_profile_spec(spec: str):
    from sn2d.hls import builtin_profile

    if Path(spec).is_file():
        return builtin_profile("TABLE", path=spec)
    kind, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise BadParamsError(f"bad profile parameter {item!r}")
        key = {"lambda": "lam"}.get(key.strip(), key.strip())
        params[key] = val.strip()
    if kind.upper() not in ("GAUSSIAN", "EXPONENTIAL", "GROUND_STATE"):
        raise BadParamsError(f"{spec!r} is neither a file nor a builtin profile")
    try:
        params = {k: float(v) if k != "m" else int(v) for k, v in params.items()}
    except ValueError as exc:
        raise BadParamsError(f"bad profile parameters in {spec!r}") from exc
    return builtin_profile(kind, **params)


def cmd_solve(args) -> int:
    from sn2d.functionals import tail_estimates, virial_report
    from sn2d.radial_ode import IntegratorConfig
    from sn2d.shooting import ShootingConfig, solve_universal, validate_solution

    integ = IntegratorConfig(rel_tol=args.tol, abs_tol=args.tol * 1e-2, r_max=args.rmax)
    sol = solve_universal(args.m, ShootingConfig(integrator=integ))
    io.write_solution_csv(args.out, sol)
    n_tail, i_tail = tail_estimates(sol)
    vr = virial_report(sol)
    rep = validate_solution(sol)
    c = BranchConstants.from_solution(sol)
    summary = {
        "m": sol.m,
        "alpha": sol.alpha,
        "n_value": sol.n_value,
        "i_value": sol.i_value,
        "n_tail": n_tail,
        "i_tail": i_tail,
        "lambda0": c.lambda0,
        "virial_residual": vr.virial_residual,
        "poisson_residual": vr.poisson_residual,
        "r_max_used": sol.r_max_used,
        "bisection_width": sol.bisection_width,
        "checks": {k: v.passed for k, v in rep.checks.items()},
    }
    text = io.to_json(summary)
    Path(args.out).with_suffix(".json").write_text(text)
    sys.stdout.write(text)
    return 0


def cmd_branch(args) -> int:
    c = _constants(args.constants)
    if args.invert:
        if args.omega is None:
            raise UsageError("branch --invert needs --omega")
        roots = lambdas_of_omega(args.omega, args.gamma, c)
        _emit(io.to_json({"omega": args.omega, "gamma": args.gamma, "omega_star": omega_star(c),
                          "roots": roots}), args.out)
        return 0
    if args.lambda_min is None or args.lambda_max is None:
        raise UsageError("branch needs --lambda-min and --lambda-max (or --invert)")
    if args.lambda_min > args.lambda_max or args.points < 1:
        raise UsageError("need lambda-min <= lambda-max and points >= 1")
    points = branch_sweep(args.gamma, args.lambda_min, args.lambda_max, args.points, c, args.spacing)
    if args.out:
        io.write_branch_csv(args.out, points)
    else:
        sys.stdout.write("gamma,lambda,omega,e0\n")
        for pt in points:
            sys.stdout.write(",".join(io.fmt(v) for v in (pt.gamma, pt.lam, pt.omega, pt.e0)) + "\n")
    return 0


def cmd_hls(args) -> int:
    from sn2d.hls import hls_check

    c = _constants(args.constants)
    reports = []
    for spec in args.profile:
        try:
            prof = parse_profile_spec(spec)
        except BadParamsError as exc:
            raise UsageError(str(exc)) from exc
        reports.append({"profile": spec, **hls_check(prof, c).to_dict()})
    _emit(io.to_json({"constants": c.source, "reports": reports}), args.out)
    return 0


def cmd_oracle(args) -> int:
    from sn2d.oracle import GridConfig, minimize_energy

    if args.points < 8:
        raise UsageError("--points must be at least 8")
    res = minimize_energy(args.lam, args.gamma, GridConfig(points=args.points))
    c = computed_constants()
    e0 = e0_of_lambda(args.lam, args.gamma, c)
    payload = res.summary()
    payload.update({"e0_formula": e0, "relative_gap": abs(res.energy / e0 - 1.0)})
    _emit(io.to_json(payload), args.out)
    return 0 if res.converged else 1


def cmd_reproduce(args) -> int:
    from sn2d.reproduce import format_table, run_checks

    rows = run_checks(args.outdir)
    print(format_table(rows))
    return 0 if all(r.passed for r in rows) else 1


COMMANDS = {
    "solve": cmd_solve,
    "branch": cmd_branch,
    "hls": cmd_hls,
    "oracle": cmd_oracle,
    "reproduce": cmd_reproduce,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Sn2dError as exc:
        print(f"sn2d: {getattr(exc, 'code', 'ERROR')}: {exc}", file=sys.stderr)
        return 1
    except np.linalg.LinAlgError as exc:
        print(f"sn2d: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
