"""Sharp logarithmic Hardy-Littlewood-Sobolev inequality on radial profiles.

For u with particle number lambda,

    -V(u) <= (lambda^2 / 4 pi) ln(8 pi T(u) / (N lambda)) - ((I + 1)/N - 1/(8 pi)) lambda^2,

where N, I are the universal constants. The weaker bound obtained from the
Carlen-Loss inequality plus the logarithmic Sobolev inequality is
-V(u) <= (lambda^2 / 4 pi) ln(T(u) / lambda).

Only radial non-negative profiles are handled. By rearrangement this is
where the extremal cases live.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from sn2d.branch import BranchConstants, computed_constants, rescale_to_physical
from sn2d.errors import BadParamsError
from sn2d.functionals import RadialProfile, kinetic, potential_v

KINDS = ("GAUSSIAN", "EXPONENTIAL", "GROUND_STATE", "TABLE")


@dataclass
class HlsReport:
    lam: float
    t_value: float
    v_value: float
    lhs: float
    rhs_sharp: float
    rhs_weak: float
    slack_sharp: float
    slack_weak: float
    constant_check: float

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"lambda": d.pop("lam"), **d}


def sharp_constant(c: BranchConstants) -> float:
    """Additive constant K in -V <= (lambda^2/4pi) ln(T/lambda) + K lambda^2."""
    return math.log(8.0 * math.pi / c.n_const) / (4.0 * math.pi) - ((c.i_const + 1.0) / c.n_const - 1.0 / (8.0 * math.pi))


def _from_tv(lam: float, t: float, v: float, c: BranchConstants) -> HlsReport:
    lhs = -v
    log_term = lam * lam / (4.0 * math.pi)
    rhs_sharp = log_term * math.log(8.0 * math.pi * t / (c.n_const * lam)) - (
        (c.i_const + 1.0) / c.n_const - 1.0 / (8.0 * math.pi)
    ) * lam * lam
    rhs_weak = log_term * math.log(t / lam)
    return HlsReport(
        lam=lam,
        t_value=t,
        v_value=v,
        lhs=lhs,
        rhs_sharp=rhs_sharp,
        rhs_weak=rhs_weak,
        slack_sharp=rhs_sharp - lhs,
        slack_weak=rhs_weak - lhs,
        constant_check=sharp_constant(c),
    )


def hls_check(p: RadialProfile, c: BranchConstants | None = None) -> HlsReport:
    c = c or computed_constants()
    return _from_tv(p.lam, kinetic(p), potential_v(p), c)


def builtin_profile(kind: str, **params) -> RadialProfile:
    """Test-family generator.

    GAUSSIAN / EXPONENTIAL take ``lam`` and ``width`` (plus optional
    ``points``, ``extent`` in widths). GROUND_STATE takes ``lam`` and optional
    ``gamma``, ``m``. TABLE takes ``path`` to an ``r,u`` CSV.
    """
    kind = kind.upper()
    if kind not in KINDS:
        raise BadParamsError(f"unknown profile kind {kind!r}")
    if kind == "TABLE":
        from sn2d.io import read_profile_csv

        if "path" not in params:
            raise BadParamsError("TABLE needs a path")
        return read_profile_csv(params["path"])

    lam = float(params.get("lam", 1.0))
    if not lam > 0:
        raise BadParamsError("lam must be positive")
    if kind == "GROUND_STATE":
        from sn2d.shooting import default_solution

        gamma = float(params.get("gamma", 1.0))
        if not gamma > 0:
            raise BadParamsError("gamma must be positive")
        return rescale_to_physical(default_solution(int(params.get("m", 0))), lam, gamma).profile

    width = float(params.get("width", 1.0))
    points = int(params.get("points", 2001))
    extent = float(params.get("extent", 12.0 if kind == "GAUSSIAN" else 24.0))
    if not (width > 0 and points >= 2000 and extent >= 12.0):
        raise BadParamsError("need width > 0, points >= 2000, extent >= 12 widths")
    r = np.linspace(0.0, extent * width, points)
    if kind == "GAUSSIAN":
        shape = np.exp(-0.5 * (r / width) ** 2)
    else:
        shape = np.exp(-r / width)
    p = RadialProfile(r, shape)
    return p.scaled(math.sqrt(lam / p.lam))


@dataclass
class DilationScan:
    sigmas: np.ndarray
    slacks: np.ndarray
    best_sigma: float
    best: HlsReport


def dilation_scan(p: RadialProfile, sigma_grid, c: BranchConstants | None = None) -> DilationScan:
    """hls_check over mass-preserving dilations u(r/sigma)/sigma; keeps the smallest slack."""
    c = c or computed_constants()
    sigmas = np.atleast_1d(np.asarray(sigma_grid, dtype=float))
    if sigmas.size == 0 or np.any(sigmas <= 0):
        raise BadParamsError("sigma grid must be non-empty and positive")
    reports = [hls_check(p.dilated(s), c) for s in sigmas]
    slacks = np.array([rep.slack_sharp for rep in reports])
    k = int(np.argmin(slacks))
    return DilationScan(sigmas, slacks, float(sigmas[k]), reports[k])
