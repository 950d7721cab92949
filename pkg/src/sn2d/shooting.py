"""Shooting on the central amplitude for the decaying universal solution.

Below the critical amplitude the profile overshoots and crosses zero; above
it the potential grows fast enough to turn the profile back up. The
decaying solution sits on the boundary between the two and is located by
bisection on alpha.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from sn2d.errors import BadParamsError, BracketFailedError
from sn2d.radial_ode import (
    STATE_FIELDS,
    IntegratorConfig,
    Outcome,
    TrajectoryOutcome,
    integrate_universal,
    origin_state,
)

MAX_EXPANSIONS = 60
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class ShootingConfig:
    alpha_lo: float = 0.1
    alpha_hi: float = 10.0
    alpha_tol: float = 1e-12
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        if not 0 < self.alpha_lo < self.alpha_hi:
            raise BadParamsError(f"need 0 < alpha_lo < alpha_hi, got {self.alpha_lo}, {self.alpha_hi}")
        if not self.alpha_tol > 0:
            raise BadParamsError("alpha_tol must be positive")


@dataclass
class UniversalSolution:
    m: int
    alpha: float
    samples: np.ndarray  # (n, 7) in STATE_FIELDS order, first row at r = 0
    n_value: float
    i_value: float
    r_max_used: float
    bisection_width: float
    outcome: Outcome = Outcome.CROSSED_ZERO

    def _col(self, name):
        return self.samples[:, STATE_FIELDS.index(name)]

    @property
    def r(self) -> np.ndarray:
        return self._col("r")

    @property
    def f(self) -> np.ndarray:
        return self._col("g")

    @property
    def u(self) -> np.ndarray:
        return self.r**self.m * self.f

    @property
    def W(self) -> np.ndarray:
        return self._col("W")

    @property
    def Wp(self) -> np.ndarray:
        return self._col("Wp")

    @property
    def jn(self) -> np.ndarray:
        return self._col("jn")

    @property
    def ji(self) -> np.ndarray:
        return self._col("ji")

    def profile(self, interp: str = "CUBIC"):
        from sn2d.functionals import RadialProfile

        return RadialProfile(self.r, self.u, interp=interp)

    def truncated(self, r_end: float) -> "UniversalSolution":
        """Copy keeping only samples with r <= r_end (for failure studies)."""
        keep = self.r <= r_end
        s = self.samples[keep]
        idx = STATE_FIELDS.index
        return replace(
            self,
            samples=s,
            n_value=2 * math.pi * s[-1, idx("jn")],
            i_value=s[-1, idx("ji")],
            r_max_used=float(s[-1, 0]),
        )


def _classify(alpha, m, cfg: IntegratorConfig) -> TrajectoryOutcome:
    return integrate_universal(alpha, m, cfg)


def bracket_amplitude(m: int, config: ShootingConfig | None = None) -> tuple[float, float]:
    """Bracket (lo, hi) with lo crossing zero and hi blowing up.

    Grows the seed bracket geometrically upward or downward, whichever side
    the critical amplitude lies on.
    """
    lo, hi, _, _ = _bracket(m, config or ShootingConfig())
    return lo, hi


def _bracket(m, config):
    cfg = config.integrator
    lo, hi = config.alpha_lo, config.alpha_hi
    out_lo, out_hi = _classify(lo, m, cfg), _classify(hi, m, cfg)
    for _ in range(MAX_EXPANSIONS):
        if Outcome.DECAYED in (out_lo.kind, out_hi.kind):
            return lo, hi, out_lo, out_hi
        if out_lo.kind is Outcome.CROSSED_ZERO and out_hi.kind is Outcome.BLEW_UP:
            return lo, hi, out_lo, out_hi
        if out_lo.kind is Outcome.BLEW_UP and out_hi.kind is Outcome.BLEW_UP:
            hi, out_hi = lo, out_lo
            lo = lo / 2.0
            out_lo = _classify(lo, m, cfg)
        elif out_lo.kind is Outcome.CROSSED_ZERO and out_hi.kind is Outcome.CROSSED_ZERO:
            lo, out_lo = hi, out_hi
            hi = hi * 2.0
            out_hi = _classify(hi, m, cfg)
        else:
            # blow-up below a crossing: orientation reversed, no clean bracket
            break
    raise BracketFailedError(
        f"m={m}: no CROSSED_ZERO/BLEW_UP bracket from seed [{config.alpha_lo}, {config.alpha_hi}]"
    )


def solve_universal(m: int = 0, config: ShootingConfig | None = None) -> UniversalSolution:
    """Bisect alpha to relative width ``alpha_tol`` and assemble the solution.

    The returned profile is the zero-crossing trajectory of the final bracket,
    cut at its crossing radius; beyond that u is taken as zero.
    """
    config = config or ShootingConfig()
    cfg = config.integrator
    lo, hi, out_lo, out_hi = _bracket(m, config)

    best = None
    for out in (out_lo, out_hi):
        if out.kind is Outcome.DECAYED:
            best = out
    n_iter = 0
    while best is None and hi - lo > config.alpha_tol * lo and n_iter < MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        out = _classify(mid, m, cfg)
        n_iter += 1
        if out.kind is Outcome.CROSSED_ZERO:
            lo, out_lo = mid, out
        elif out.kind is Outcome.BLEW_UP:
            hi, out_hi = mid, out
        else:
            best = out
    if best is None:
        best = out_lo

    samples = np.vstack([origin_state(best.alpha, m).as_array(), best.samples])
    samples[-1, 1] = max(samples[-1, 1], 0.0)
    jn_end = samples[-1, STATE_FIELDS.index("jn")]
    ji_end = samples[-1, STATE_FIELDS.index("ji")]
    return UniversalSolution(
        m=int(m),
        alpha=best.alpha,
        samples=samples,
        n_value=2.0 * math.pi * float(jn_end),
        i_value=float(ji_end),
        r_max_used=best.r_event,
        bisection_width=hi - lo,
        outcome=best.kind,
    )


@dataclass
class Check:
    passed: bool
    margin: float
    detail: str = ""


@dataclass
class ValidationReport:
    checks: dict[str, Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]


def validate_solution(
    sol: UniversalSolution,
    decay_rate: float = 1.0,
    tail_level: float = 1e-4,
    poisson_tol: float = 1e-8,
) -> ValidationReport:
    """Positivity, monotone f, fast tail decay and Poisson consistency.

    Margins are signed so that a positive margin means the check passed.
    """
    r, u, f = sol.r, sol.u, sol.f
    checks = {}

    interior = (r > 0) & (r < sol.r_max_used)
    u_min = float(np.min(u[interior])) if interior.any() else -1.0
    checks["positivity"] = Check(u_min > 0, u_min, "min u on (0, r_end)")

    # the last sample is the crossing point where f is clipped to zero
    df = np.diff(f[:-1])
    worst = float(np.max(df)) if df.size else 0.0
    checks["f_decreasing"] = Check(worst < 0, -worst, "max forward difference of f")

    r_end = r[-1]
    window = r >= 0.9 * r_end
    ra = r[window][0]
    ua = u[window][0]
    u_max = float(np.max(u))
    with np.errstate(divide="ignore"):
        bound = ua * np.exp(-decay_rate * (r[window] - ra))
    excess = float(np.max(u[window] - bound))
    level = ua / u_max
    rate_ok = excess <= 1e-12 * u_max
    checks["tail_decay"] = Check(
        bool(rate_ok and level <= tail_level and sol.W[-1] > 1.0),
        min(-excess, tail_level - level, sol.W[-1] - 1.0),
        f"u(0.9 r_end)/max u = {level:.3e}, W(r_end) = {sol.W[-1]:.4f}",
    )

    res = float(np.max(np.abs(r * sol.Wp - sol.jn)))
    scale = max(float(sol.jn[-1]), 1e-300)
    checks["poisson"] = Check(res <= poisson_tol * scale, poisson_tol - res / scale, f"max|rW' - jn| = {res:.3e}")
    return ValidationReport(checks)


@functools.lru_cache(maxsize=16)
def default_solution(m: int = 0) -> UniversalSolution:
    """Cached solve with default settings; treat the result as read-only."""
    return solve_universal(m)
