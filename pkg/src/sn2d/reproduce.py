"""One-shot reproduction of the reference constants and cross-checks.

Each check returns a named pass/fail row; data files written alongside are
deterministic (no timestamps), so two runs produce identical bytes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from sn2d import io
from sn2d.branch import (
    PAPER_APPENDIX,
    BranchConstants,
    branch_sweep,
    e0_of_lambda,
    lambdas_of_omega,
    omega_of_lambda,
    omega_star,
)
from sn2d.functionals import kinetic, log_moment, particle_number, tail_estimates, virial_report
from sn2d.hls import builtin_profile, dilation_scan, hls_check
from sn2d.oracle import gradient_selftest, minimize_energy
from sn2d.shooting import solve_universal, validate_solution

REF_N = 2.0 * math.pi * 1.64145
REF_I = 0.2276
REF_LAMBDA0 = 46.03
REF_HLS_CONSTANT = -0.0084


@dataclass
class Row:
    name: str
    passed: bool
    detail: str


def random_family(n: int = 50, seed: int = 2008):
    """Gaussian and exponential profiles with random masses and widths."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        kind = "GAUSSIAN" if k % 2 == 0 else "EXPONENTIAL"
        lam = float(rng.uniform(0.1, 100.0))
        width = float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
        out.append((kind, lam, width, builtin_profile(kind, lam=lam, width=width)))
    return out


def run_checks(outdir=None) -> list[Row]:
    rows: list[Row] = []
    out = Path(outdir) if outdir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    sol = solve_universal(0)
    elapsed = time.perf_counter() - t0
    prof = sol.profile()
    n_quad, i_quad = particle_number(prof), log_moment(prof)
    n_tail, i_tail = tail_estimates(sol)
    rows.append(Row("N = 10.3135", abs(sol.n_value - REF_N) <= 1e-3 and elapsed < 5.0,
                    f"N={sol.n_value:.6f} in {elapsed:.2f}s"))
    i_gap = abs(i_tail - i_quad) / abs(i_quad)
    rows.append(Row("I = 0.2276", abs(sol.i_value - REF_I) <= 1e-3 and i_gap <= 1e-4,
                    f"I={sol.i_value:.6f}, tail/quad gap {i_gap:.1e}"))
    c = BranchConstants.from_solution(sol)
    rows.append(Row("Lambda0 = 46.03", abs(c.lambda0 - REF_LAMBDA0) <= 0.05, f"Lambda0={c.lambda0:.4f}"))
    vr = virial_report(sol)
    rows.append(Row("virial T = N^2/8pi", vr.virial_residual <= 1e-3, f"residual {vr.virial_residual:.1e}"))

    ws = omega_star(c)
    counts = [len(lambdas_of_omega(w, 1.0, c)) for w in (1.0, 0.0, ws, 2.0)]
    zero_root = lambdas_of_omega(0.0, 1.0, c)[0]
    lams = np.geomspace(0.01, 1e4, 200)
    trip = max(min(abs(x / lam - 1) for x in lambdas_of_omega(omega_of_lambda(lam, 1.0, c), 1.0, c)) for lam in lams)
    rows.append(Row(
        "frequency structure",
        abs(ws - 1.3475) <= 1e-3 and counts == [2, 1, 1, 0] and abs(zero_root - REF_LAMBDA0) <= 0.05 and trip <= 1e-8,
        f"omega*={ws:.5f}, roots {counts}, round trip {trip:.1e}",
    ))

    gaps = []
    for lam in (c.lambda0 / math.e, c.lambda0, 2.0 * c.lambda0):
        t1 = time.perf_counter()
        res = minimize_energy(lam, 1.0)
        dt = time.perf_counter() - t1
        gaps.append((abs(res.energy / e0_of_lambda(lam, 1.0, c) - 1.0), dt))
    rows.append(Row("oracle energy vs e0", all(g <= 1e-2 and dt < 30 for g, dt in gaps),
                    "gaps " + ", ".join(f"{g:.1e}" for g, _ in gaps)))

    k_pub = hls_check(builtin_profile("GAUSSIAN", lam=1.0, width=1.0), PAPER_APPENDIX).constant_check
    family = random_family()
    worst = min(hls_check(p, c).slack_sharp / lam**2 for _, lam, _, p in family)
    gs = builtin_profile("GROUND_STATE", lam=c.lambda0)
    scan = dilation_scan(gs, np.linspace(0.5, 2.0, 7), c)
    gs_slack = scan.best.slack_sharp / c.lambda0**2
    rows.append(Row(
        "sharp log-HLS",
        abs(k_pub - REF_HLS_CONSTANT) <= 2e-4 and worst >= -1e-6 and gs_slack <= 1e-3,
        f"K={k_pub:.5f}, family min slack {worst:.2e}, ground state {gs_slack:.1e}",
    ))

    angular = []
    for m in (1, 2):
        sm = solve_universal(m)
        rep = validate_solution(sm)
        n_gap = abs(tail_estimates(sm)[0] - particle_number(sm.profile())) / sm.n_value
        ok = rep.checks["positivity"].passed and rep.checks["f_decreasing"].passed
        angular.append((m, ok and virial_report(sm).virial_residual < 1e-3 and n_gap <= 1e-4, sm))
    rows.append(Row("angular m=1,2", all(a[1] for a in angular),
                    ", ".join(f"m={m}: N={s.n_value:.4f}" for m, _, s in angular)))

    g_err = gradient_selftest()
    rows.append(Row("oracle gradient", g_err <= 1e-5, f"max rel err {g_err:.1e}"))

    if out is not None:
        io.write_solution_csv(out / "solution_m0.csv", sol)
        for m, _, sm in angular:
            io.write_solution_csv(out / f"solution_m{m}.csv", sm)
        io.write_json(out / "constants.json", {
            "n_value": sol.n_value, "i_value": sol.i_value, "n_tail": n_tail, "i_tail": i_tail,
            "n_quadrature": n_quad, "i_quadrature": i_quad, "lambda0": c.lambda0,
            "omega_star": ws, "alpha": sol.alpha, "kinetic": kinetic(prof),
        })
        io.write_branch_csv(out / "branch_gamma1.csv", branch_sweep(1.0, 1.0, 200.0, 64, c))
        io.write_json(out / "hls_family.json", {
            "reports": [dict(kind=k, width=w, **hls_check(p, c).to_dict()) for k, _, w, p in family]
        })
    return rows


def format_table(rows: list[Row]) -> str:
    width = max(len(r.name) for r in rows)
    lines = [f"{'check':<{width}}  result  detail"]
    for r in rows:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    return "\n".join(lines)
