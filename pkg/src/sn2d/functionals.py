"""Energy functionals of radial profiles u(|x|) on R^2.

Conventions (dx = 2 pi r dr):

    N(u) = 2 pi int u^2 r dr                       particle number
    I(u) = int u^2 r ln r dr                       log-moment (no 2 pi)
    T_m(u) = 2 pi int (u'^2 + m^2 u^2 / r^2) r dr  kinetic energy
    V(u) = (1 / 2 pi) int int ln|x - y| u^2(x) u^2(y) dx dy

For radial densities the angular average of ln|x - y| is ln max(|x|, |y|),
so V collapses to V = 2 int u^2 ln(r) eta(r) r dr with the enclosed mass
eta(r) = 2 pi int_0^r u^2 s ds.

All integrals are taken with per-interval Gauss-Legendre rules on the
interpolant of the samples. The rule never touches an interval endpoint,
which keeps the r ln r weight at the origin harmless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from sn2d.errors import (
    BadParamsError,
    CentrifugalDivergenceError,
    EmptyProfileError,
    InsufficientRangeError,
)

GL_POINTS = 6
_GL_T, _GL_W = np.polynomial.legendre.leggauss(GL_POINTS)
_GL_T = 0.5 * (_GL_T + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass
class RadialProfile:
    grid: np.ndarray
    values: np.ndarray
    interp: str = "CUBIC"
    lam: float = field(init=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.ndim != 1 or self.grid.size < 2 or self.values.shape != self.grid.shape:
            raise EmptyProfileError("profile needs at least two (r, u) samples of equal length")
        if not (np.all(np.isfinite(self.grid)) and np.all(np.isfinite(self.values))):
            raise BadParamsError("profile contains non-finite entries")
        if self.grid[0] < 0 or np.any(np.diff(self.grid) <= 0):
            raise BadParamsError("grid must be non-negative and strictly increasing")
        if np.any(self.values < 0):
            raise BadParamsError("profile values must be non-negative")
        if self.interp not in ("LINEAR", "CUBIC"):
            raise BadParamsError(f"unknown interpolation rule {self.interp!r}")
        self._spline = None
        self.lam = _particle_number(self)
        if not self.lam > 0:
            raise EmptyProfileError("profile carries no mass")

    @property
    def lambda_(self) -> float:
        return self.lam

    def __call__(self, r, nu: int = 0) -> np.ndarray:
        """Interpolated u (nu=0) or u' (nu=1) at radii r inside the grid."""
        r = np.asarray(r, dtype=float)
        if self.interp == "CUBIC":
            if self._spline is None:
                self._spline = CubicSpline(self.grid, self.values)
            return self._spline(r, nu)
        idx = np.clip(np.searchsorted(self.grid, r, side="right") - 1, 0, self.grid.size - 2)
        slope = np.diff(self.values)[idx] / np.diff(self.grid)[idx]
        if nu == 1:
            return slope
        return self.values[idx] + slope * (r - self.grid[idx])

    def scaled(self, c: float) -> "RadialProfile":
        return RadialProfile(self.grid, c * self.values, self.interp)

    def dilated(self, sigma: float) -> "RadialProfile":
        """Mass-preserving dilation u_sigma(r) = u(r / sigma) / sigma."""
        if not sigma > 0:
            raise BadParamsError("sigma must be positive")
        return RadialProfile(sigma * self.grid, self.values / sigma, self.interp)


def _nodes(p: RadialProfile):
    a, b = p.grid[:-1], p.grid[1:]
    h = (b - a)[:, None]
    x = a[:, None] + h * _GL_T[None, :]
    w = h * _GL_W[None, :]
    return x, w


def _particle_number(p: RadialProfile) -> float:
    x, w = _nodes(p)
    u = p(x)
    return float(2.0 * math.pi * np.sum(w * u * u * x))


def particle_number(p: RadialProfile) -> float:
    return _particle_number(p)


def log_moment(p: RadialProfile) -> float:
    """int u^2 r ln r dr over the grid."""
    x, w = _nodes(p)
    u = p(x)
    return float(np.sum(w * u * u * x * np.log(x)))


def _check_centrifugal(p: RadialProfile, m: int) -> None:
    if m == 0:
        return
    scale = float(np.max(p.values))
    r0, u0 = p.grid[0], p.values[0]
    if u0 <= 1e-12 * scale:
        return
    if r0 == 0:
        raise CentrifugalDivergenceError(f"u(0) = {u0:g} > 0 with m = {m}")
    # local power law u ~ r^k near the first sample; u/r bounded needs k >= 1
    r1, u1 = p.grid[1], p.values[1]
    k = math.log(max(u1, 1e-300) / u0) / math.log(r1 / r0)
    if k < 0.5:
        raise CentrifugalDivergenceError(f"u ~ r^{k:.3f} near r = {r0:g}; m^2/r^2 term not integrable")


def kinetic(p: RadialProfile, m: int = 0) -> float:
    """T_m = 2 pi int (u'^2 + m^2 u^2 / r^2) r dr; m = 0 is the plain kinetic energy."""
    if int(m) != m or m < 0:
        raise BadParamsError("m must be a non-negative integer")
    _check_centrifugal(p, m)
    x, w = _nodes(p)
    du = p(x, 1)
    integrand = du * du * x
    if m:
        u = p(x)
        integrand = integrand + m * m * u * u / x
    return float(2.0 * math.pi * np.sum(w * integrand))


def enclosed_mass(p: RadialProfile):
    """Quadrature nodes, weights, density and eta(r) = 2 pi int_0^r u^2 s ds at the nodes."""
    x, w = _nodes(p)
    rho = p(x) ** 2
    cell = 2.0 * math.pi * np.sum(w * rho * x, axis=1)
    start = np.concatenate([[0.0], np.cumsum(cell)[:-1]])
    a = p.grid[:-1][:, None, None]
    span = x[:, :, None] - a
    xi = a + span * _GL_T[None, None, :]
    wi = span * _GL_W[None, None, :]
    partial = 2.0 * math.pi * np.sum(wi * p(xi) ** 2 * xi, axis=2)
    eta = start[:, None] + partial
    return x, w, rho, eta


def potential_v(p: RadialProfile) -> float:
    """V = 2 int u^2 ln(r) eta(r) r dr (Newton's theorem for radial densities)."""
    x, w, rho, eta = enclosed_mass(p)
    return float(2.0 * np.sum(w * rho * np.log(x) * eta * x))


@dataclass
class FunctionalReport:
    t_value: float
    v_value: float
    n_value: float
    i_value: float
    e_value: float
    gamma: float


def evaluate(p: RadialProfile, gamma: float = 1.0, m: int = 0) -> FunctionalReport:
    t = kinetic(p, m)
    v = potential_v(p)
    return FunctionalReport(t, v, p.lam, log_moment(p), t + 0.5 * gamma * v, gamma)


def tail_estimates(sol) -> tuple[float, float]:
    """(N, I) from the far-field limits 2 pi r W' and r W' ln r - W at the last sample."""
    r, W, Wp = sol.r[-1], sol.W[-1], sol.Wp[-1]
    if not W > 1.0:
        raise InsufficientRangeError(f"W(r_end) = {W:.4g} <= 1 at r_end = {r:.4g}")
    return 2.0 * math.pi * r * Wp, r * Wp * math.log(r) - W


def virial_residual(p: RadialProfile, m: int = 0, gamma: float = 1.0) -> float:
    """|T_m - gamma N^2 / 8 pi| / T_m."""
    t = kinetic(p, m)
    return abs(t - gamma * p.lam**2 / (8.0 * math.pi)) / t


@dataclass
class VirialReport:
    virial_residual: float
    poisson_residual: float
    tol: float = 1e-3

    @property
    def passed(self) -> bool:
        return self.virial_residual <= self.tol and self.poisson_residual <= self.tol


def virial_report(sol) -> VirialReport:
    poisson = float(np.max(np.abs(sol.r * sol.Wp - sol.jn)))
    return VirialReport(virial_residual(sol.profile(), sol.m), poisson)
