"""Shooting-free cross-check: minimise E = T + (gamma/2) V at fixed mass.

The radial profile lives on a uniform cell-centred grid r_k = (k + 1/2) h
with u = 0 imposed one cell past the end. On that grid

    N = sum_k w_k u_k^2,                    w_k = 2 pi r_k h
    T = 2 pi sum_k (k + 1)(u_{k+1} - u_k)^2
    V = (1 / 2 pi) sum_jk q_j q_k ln max(r_j, r_k),   q_k = w_k u_k^2

and all three have exact gradients computable in O(n) through cumulative
sums. The descent direction is the energy gradient preconditioned by
(S + c M)^-1, where S is the kinetic stiffness matrix and M the mass
matrix, projected onto the tangent space of the mass sphere. Each step is
followed by renormalisation back onto N = lambda and is accepted through
Armijo backtracking.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from sn2d.branch import PAPER_APPENDIX
from sn2d.errors import BadParamsError
from sn2d.functionals import RadialProfile


class NotConvergedWarning(RuntimeWarning):
    code = "NOT_CONVERGED"


@dataclass(frozen=True)
class GridConfig:
    points: int = 1024
    extent: float | None = None  # None: 8 estimated widths

    def build(self, width: float) -> "Grid":
        extent = self.extent if self.extent is not None else 8.0 * width
        if self.points < 8 or not extent > 0:
            raise BadParamsError("grid needs >= 8 points and positive extent")
        return Grid(self.points, extent)


@dataclass(frozen=True)
class OptConfig:
    gtol: float = 1e-7  # residual floor from roundoff is ~sqrt(eps)
    max_iter: int = 5000
    starts: tuple[float, ...] = (0.5, 1.0, 2.0)
    armijo: float = 1e-4


class Grid:
    def __init__(self, points: int, extent: float):
        self.n = points
        self.h = extent / points
        self.k = np.arange(points)
        self.r = (self.k + 0.5) * self.h
        self.w = 2.0 * math.pi * self.r * self.h
        self.log_r = np.log(self.r)
        # T = 2 pi sum_k (k + 1)(u_{k+1} - u_k)^2 with u_n = 0
        self.bond = 2.0 * math.pi * (self.k + 1.0)

    def mass(self, u):
        return float(np.dot(self.w, u * u))

    def kinetic(self, u):
        du = np.append(u[1:], 0.0) - u
        return float(np.dot(self.bond, du * du))

    def kinetic_grad(self, u):
        du = np.append(u[1:], 0.0) - u
        flux = self.bond * du
        g = -2.0 * flux
        g[1:] += 2.0 * flux[:-1]
        return g

    def _potential_field(self, u):
        q = self.w * u * u
        inner = np.cumsum(q)
        outer = np.cumsum((q * self.log_r)[::-1])[::-1]
        outer = np.append(outer[1:], 0.0)
        return q, self.log_r * inner + outer

    def potential(self, u):
        q, phi = self._potential_field(u)
        return float(np.dot(q, phi) / (2.0 * math.pi))

    def potential_grad(self, u):
        _, phi = self._potential_field(u)
        return 2.0 * self.w * u * phi / math.pi

    def energy(self, u, gamma):
        return self.kinetic(u) + 0.5 * gamma * self.potential(u)

    def energy_grad(self, u, gamma):
        return self.kinetic_grad(u) + 0.5 * gamma * self.potential_grad(u)

    def preconditioner(self, shift):
        """Banded form of 2 (S + shift M) for solve_banded."""
        diag = 2.0 * self.bond.copy()
        diag[1:] += 2.0 * self.bond[:-1]
        ab = np.zeros((3, self.n))
        ab[0, 1:] = -2.0 * self.bond[:-1]
        ab[1] = diag + 2.0 * shift * self.w
        ab[2, :-1] = -2.0 * self.bond[:-1]
        return ab


@dataclass
class OracleResult:
    profile: RadialProfile
    energy: float
    grad_norm: float
    iterations: int
    converged: bool
    lam: float
    gamma: float
    t_value: float = 0.0
    v_value: float = 0.0
    history: list[float] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "lambda": self.lam,
            "gamma": self.gamma,
            "energy": self.energy,
            "t_value": self.t_value,
            "v_value": self.v_value,
            "grad_norm": self.grad_norm,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def estimated_width(lam: float, gamma: float, n_const: float = PAPER_APPENDIX.n_const) -> float:
    """Length scale 1.5 / sqrt(gamma lambda / N) of the ground state of mass lam."""
    return 1.5 / math.sqrt(gamma * lam / n_const)


def _descend(grid: Grid, u, lam, gamma, shift, opt: OptConfig):
    ab = grid.preconditioner(shift)
    u = u * math.sqrt(lam / grid.mass(u))
    e = grid.energy(u, gamma)
    history = [e]
    tau = 1.0
    res = math.inf
    it = 0
    for it in range(1, opt.max_iter + 1):
        g = grid.energy_grad(u, gamma)
        mu_vec = grid.w * u  # half the constraint gradient
        pg = solve_banded((1, 1), ab, g)
        pm = solve_banded((1, 1), ab, mu_vec)
        beta = np.dot(mu_vec, pg) / np.dot(mu_vec, pm)
        d = pg - beta * pm
        # Euler-Lagrange residual in the preconditioned dual norm, relative to the
        # kinetic gradient (the full gradient itself vanishes when omega = 0)
        resid = g - beta * mu_vec
        gk = grid.kinetic_grad(u)
        ref = np.dot(gk, solve_banded((1, 1), ab, gk))
        res = math.sqrt(max(np.dot(resid, d), 0.0) / max(ref, 1e-300))
        if res <= opt.gtol:
            break
        slope = float(np.dot(g, d))
        tau = min(2.0 * tau, 4.0)
        while True:
            trial = u - tau * d
            trial *= math.sqrt(lam / grid.mass(trial))
            e_trial = grid.energy(trial, gamma)
            if e_trial <= e - opt.armijo * tau * slope or tau < 1e-14:
                break
            tau *= 0.5
        if e_trial >= e:
            break
        u, e = trial, e_trial
        history.append(e)
    return np.abs(u), e, res, it, history


def minimize_energy(
    lam: float,
    gamma: float = 1.0,
    grid_config: GridConfig | None = None,
    opt_config: OptConfig | None = None,
) -> OracleResult:
    """Best-of multi-start minimisation of the discrete energy at N(u) = lam.

    A run that stops above ``gtol`` is still returned, with converged=False
    and a NotConvergedWarning.
    """
    if not (lam > 0 and gamma > 0):
        raise BadParamsError("lambda and gamma must be positive")
    grid_config = grid_config or GridConfig()
    opt = opt_config or OptConfig()
    width = estimated_width(lam, gamma)
    grid = grid_config.build(width)
    shift = gamma * lam / PAPER_APPENDIX.n_const

    def start(scale):
        u0 = np.exp(-0.5 * (grid.r / (scale * width / 1.5)) ** 2)
        return _descend(grid, u0, lam, gamma, shift, opt)

    workers = max(1, int(os.environ.get("SN2D_THREADS", "1") or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        runs = list(pool.map(start, opt.starts))
    u, e, res, it, history = min(runs, key=lambda run: run[1])
    converged = res <= opt.gtol
    if not converged:
        warnings.warn(f"oracle stopped at residual {res:.3e} > gtol={opt.gtol:g}", NotConvergedWarning, stacklevel=2)
    return OracleResult(
        profile=RadialProfile(grid.r, u),
        energy=e,
        grad_norm=res,
        iterations=it,
        converged=converged,
        lam=lam,
        gamma=gamma,
        t_value=grid.kinetic(u),
        v_value=grid.potential(u),
        history=history,
    )


def gradient_selftest(
    grid_config: GridConfig | None = None,
    n_profiles: int = 10,
    seed: int = 0,
    step: float = 1e-6,
    terms: str = "energy",
    gamma: float = 1.0,
) -> float:
    """Worst max-norm relative gap between analytic and central-difference gradients.

    ``terms`` picks the functional: "energy", "kinetic" or "potential".
    """
    grid_config = grid_config or GridConfig(extent=12.0)
    grid = grid_config.build(1.5)
    funcs = {
        "energy": (lambda u: grid.energy(u, gamma), lambda u: grid.energy_grad(u, gamma)),
        "kinetic": (grid.kinetic, grid.kinetic_grad),
        "potential": (grid.potential, grid.potential_grad),
    }
    if terms not in funcs:
        raise BadParamsError(f"unknown terms {terms!r}")
    f, df = funcs[terms]
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_profiles):
        width = rng.uniform(0.5, 3.0)
        u = np.exp(-0.5 * (grid.r / width) ** 2) * (1.0 + 0.3 * rng.standard_normal(grid.n))
        exact = df(u)
        fd = np.empty(grid.n)
        for k in range(grid.n):
            up, dn = u.copy(), u.copy()
            up[k] += step
            dn[k] -= step
            fd[k] = (f(up) - f(dn)) / (2.0 * step)
        scale = np.max(np.abs(fd))
        if scale == 0.0:
            continue
        worst = max(worst, float(np.max(np.abs(exact - fd)) / scale))
    return worst
