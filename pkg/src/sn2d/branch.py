"""Scaling relations between the universal solution and physical bound states.

A ground state with particle number lambda at coupling gamma is a
rescaling of the universal solution (u, W): with E = gamma lambda / N,

    u_lambda(x) = (E / sqrt(gamma)) u(sqrt(E) |x|),

and its frequency and energy follow in closed form from the constants
N, I of the universal solution, or equivalently from
Lambda0 = N exp(4 pi (1 + I) / N).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from sn2d.errors import BadParamsError, ConsistencyError
from sn2d.functionals import RadialProfile, kinetic, potential_v

FORM_RTOL = 1e-6


@dataclass(frozen=True)
class BranchConstants:
    n_const: float
    i_const: float
    lambda0: float
    source: str = "COMPUTED"

    def __post_init__(self):
        if not (self.n_const > 0 and self.lambda0 > 0):
            raise BadParamsError("N and Lambda0 must be positive")
        if abs(self.lambda0 / self.lambda0_from_n_i - 1.0) > 1e-3:
            raise ConsistencyError(
                f"Lambda0 = {self.lambda0} inconsistent with N, I (gives {self.lambda0_from_n_i})"
            )

    @property
    def lambda0_from_n_i(self) -> float:
        return lambda0_of(self.n_const, self.i_const)

    @property
    def mismatch(self) -> float:
        """|ln(Lambda0 / N exp(4 pi (1 + I) / N))|; zero for computed constants."""
        return abs(math.log(self.lambda0 / self.lambda0_from_n_i))

    @classmethod
    def from_n_i(cls, n_const: float, i_const: float, source: str = "COMPUTED") -> "BranchConstants":
        return cls(n_const, i_const, lambda0_of(n_const, i_const), source)

    @classmethod
    def from_solution(cls, sol) -> "BranchConstants":
        return cls.from_n_i(sol.n_value, sol.i_value, "COMPUTED")


def lambda0_of(n_const: float, i_const: float) -> float:
    return n_const * math.exp(4.0 * math.pi * (1.0 + i_const) / n_const)


PAPER_APPENDIX = BranchConstants(2.0 * math.pi * 1.64145, 0.2276, 46.03, "PAPER_APPENDIX")


def computed_constants(m: int = 0) -> BranchConstants:
    from sn2d.shooting import default_solution

    return BranchConstants.from_solution(default_solution(m))


@dataclass(frozen=True)
class BranchPoint:
    gamma: float
    lam: float
    omega: float
    e0: float


def _check_positive(lam, gamma):
    if not (lam > 0 and gamma > 0):
        raise BadParamsError(f"lambda and gamma must be positive, got {lam}, {gamma}")


def _agree(a, b, scale, c: BranchConstants, what):
    # rounded constants carry a small Lambda0 mismatch, which shifts both forms by scale * mismatch
    tol = FORM_RTOL * scale + 1.01 * scale * c.mismatch
    if abs(a - b) > tol:
        raise ConsistencyError(f"{what}: Lambda0 form {a!r} vs N,I form {b!r}")


def omega_of_lambda(lam: float, gamma: float, c: BranchConstants) -> float:
    """omega = -(gamma lambda / 4 pi) ln(gamma lambda / Lambda0)."""
    _check_positive(lam, gamma)
    gl = gamma * lam
    omega = -gl / (4.0 * math.pi) * math.log(gl / c.lambda0)
    general = gl / c.n_const * (1.0 + c.i_const - c.n_const / (4.0 * math.pi) * math.log(gl / c.n_const))
    _agree(omega, general, gl / (4.0 * math.pi) * max(1.0, abs(math.log(gl / c.lambda0))), c, "omega")
    return omega


def e0_of_lambda(lam: float, gamma: float, c: BranchConstants) -> float:
    """Ground-state energy e0 = (gamma lambda^2 / 16 pi)(1 - 2 ln(gamma lambda / Lambda0))."""
    _check_positive(lam, gamma)
    gl = gamma * lam
    pref = gamma * lam * lam / (16.0 * math.pi)
    e0 = pref * (1.0 - 2.0 * math.log(gl / c.lambda0))
    general = pref * (1.0 + 8.0 * math.pi * (1.0 + c.i_const) / c.n_const - 2.0 * math.log(gl / c.n_const))
    _agree(e0, general, 2.0 * pref * max(1.0, abs(math.log(gl / c.lambda0))), c, "e0")
    return e0


def e0_derivative_error(lam: float, gamma: float, c: BranchConstants, step: float = 1e-5) -> float:
    """Relative gap between the central difference of e0 in lambda and omega."""
    h = step * lam
    de = (e0_of_lambda(lam + h, gamma, c) - e0_of_lambda(lam - h, gamma, c)) / (2.0 * h)
    omega = omega_of_lambda(lam, gamma, c)
    return abs(de - omega) / max(abs(omega), gamma * lam / (4.0 * math.pi))


def omega_star(c: BranchConstants) -> float:
    """Largest admissible frequency, Lambda0 / (4 pi e); independent of gamma."""
    w = c.lambda0 / (4.0 * math.pi * math.e)
    from_n_i = c.n_const / (4.0 * math.pi * math.e) * math.exp(4.0 * math.pi * (1.0 + c.i_const) / c.n_const)
    if abs(w / from_n_i - 1.0) > 1e-3:
        raise ConsistencyError(f"omega*: {w} vs {from_n_i}")
    return w


def _solve_x(s: float) -> list[float]:
    """Roots x > 0 of -x ln x = s."""
    h = lambda x: -x * math.log(x) - s  # noqa: E731
    peak = 1.0 / math.e
    if s < 0:
        hi = 2.0
        while h(hi) > 0:
            hi *= 2.0
        return [brentq(h, 1.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)]
    if s == 0:
        return [1.0]
    gap = peak - s
    snap = 8 * np.finfo(float).eps * peak
    if gap < -snap:
        return []
    if gap <= snap:
        return [peak]
    # near the tangency the two roots sit at peak -/+ d with -x ln x ~ 1/e - (e/2) d^2
    d = math.sqrt(2.0 * gap / math.e)
    if 2.0 * d < 1e-4 * peak:
        roots = []
        for x in (peak - d, peak + d):
            for _ in range(4):
                x -= h(x) / (-math.log(x) - 1.0)
            roots.append(x)
        return roots
    kw = dict(xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    # -x ln x ~ x ln(1/x) is tiny near 0; shrink the left end until it brackets
    lo = peak / 2.0
    while h(lo) > 0:
        lo /= 2.0
    return [brentq(h, lo, peak, **kw), brentq(h, peak, 1.0, **kw)]


def lambdas_of_omega(omega: float, gamma: float, c: BranchConstants) -> list[float]:
    """Particle numbers with frequency ``omega``: 0, 1 or 2 values, ascending."""
    if not gamma > 0:
        raise BadParamsError("gamma must be positive")
    s = 4.0 * math.pi * omega / c.lambda0
    return [x * c.lambda0 / gamma for x in _solve_x(s)]


@dataclass
class BoundState:
    profile: RadialProfile
    gamma: float
    lam: float
    omega: float
    t_value: float
    v_value: float
    e_value: float
    m: int = 0

    @property
    def virial_residual(self) -> float:
        return abs(self.t_value - self.gamma * self.lam**2 / (8.0 * math.pi)) / self.t_value


def rescale_to_physical(sol, lam: float, gamma: float) -> BoundState:
    """Physical bound state with particle number ``lam`` at coupling ``gamma``."""
    _check_positive(lam, gamma)
    c = BranchConstants.from_solution(sol)
    scale = gamma * lam / sol.n_value
    profile = RadialProfile(sol.r / math.sqrt(scale), scale / math.sqrt(gamma) * sol.u)
    t = kinetic(profile, sol.m)
    v = potential_v(profile)
    return BoundState(
        profile=profile,
        gamma=gamma,
        lam=lam,
        omega=omega_of_lambda(lam, gamma, c),
        t_value=t,
        v_value=v,
        e_value=t + 0.5 * gamma * v,
        m=sol.m,
    )


def sweep_threads() -> int:
    try:
        return max(1, int(os.environ.get("SN2D_THREADS", "1")))
    except ValueError:
        return 1


def branch_sweep(
    gamma: float,
    lam_min: float,
    lam_max: float,
    points: int,
    c: BranchConstants,
    spacing: str = "log",
) -> list[BranchPoint]:
    """(gamma, lambda, omega, e0) along a lambda grid, in grid order."""
    if not (0 < lam_min <= lam_max) or points < 1:
        raise BadParamsError("need 0 < lambda_min <= lambda_max and points >= 1")
    if spacing == "log":
        lams = np.geomspace(lam_min, lam_max, points)
    elif spacing == "linear":
        lams = np.linspace(lam_min, lam_max, points)
    else:
        raise BadParamsError(f"unknown spacing {spacing!r}")

    def point(lam):
        lam = float(lam)
        return BranchPoint(gamma, lam, omega_of_lambda(lam, gamma, c), e0_of_lambda(lam, gamma, c))

    with ThreadPoolExecutor(max_workers=sweep_threads()) as pool:
        return list(pool.map(point, lams))
