"""Integration of the universal radial system.

For angular index m the profile is carried in the regularised variable
f = r^-m u, which obeys

    f'' + (2m + 1)/r f' = (W - 1) f,      (r W')' = r u^2,

with f(0) = alpha > 0, f'(0) = 0 and W(0) = W'(0) = 0. Two running
integrals ride along with the state,

    jn(r) = int_0^r u^2 s ds,    ji(r) = int_0^r u^2 s ln s ds,

so that particle number and log-moment inherit the step-size control.
Each trajectory ends in one of three terminal events, which is what the
shooting layer bisects on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import astuple, dataclass, fields

import numpy as np
from scipy.integrate import solve_ivp

from sn2d.errors import BadParamsError, NoEventError, StepUnderflowError

STATE_FIELDS = ("r", "g", "gp", "W", "Wp", "jn", "ji")


class Outcome(enum.Enum):
    CROSSED_ZERO = "CROSSED_ZERO"
    BLEW_UP = "BLEW_UP"
    DECAYED = "DECAYED"


@dataclass(frozen=True)
class OdeState:
    r: float
    g: float
    gp: float
    W: float
    Wp: float
    jn: float
    ji: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, row) -> "OdeState":
        return cls(*(float(x) for x in row))


@dataclass(frozen=True)
class IntegratorConfig:
    """Step control and terminal-event settings.

    ``blowup_threshold`` and ``decay_threshold`` are expressed in units of
    the shooting amplitude alpha, so one config serves every alpha.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    r_start: float = 1e-4
    r_max: float = 60.0
    blowup_threshold: float = 10.0
    decay_threshold: float = 1e-12
    n_samples: int = 4001

    def __post_init__(self):
        if not 0.0 < self.r_start < self.r_max:
            raise BadParamsError(f"need 0 < r_start < r_max, got {self.r_start}, {self.r_max}")
        for f in fields(self):
            if f.name != "n_samples" and not getattr(self, f.name) > 0:
                raise BadParamsError(f"{f.name} must be positive")
        if self.n_samples < 2:
            raise BadParamsError("n_samples must be at least 2")

    def refined(self, factor: float = 0.5) -> "IntegratorConfig":
        """Copy with both step tolerances multiplied by ``factor``."""
        return IntegratorConfig(
            rel_tol=self.rel_tol * factor,
            abs_tol=self.abs_tol * factor,
            r_start=self.r_start,
            r_max=self.r_max,
            blowup_threshold=self.blowup_threshold,
            decay_threshold=self.decay_threshold,
            n_samples=self.n_samples,
        )


@dataclass
class TrajectoryOutcome:
    kind: Outcome
    r_event: float
    final_state: OdeState
    samples: np.ndarray  # shape (n, 7), columns in STATE_FIELDS order
    alpha: float
    m: int

    def column(self, name: str) -> np.ndarray:
        return self.samples[:, STATE_FIELDS.index(name)]

    @property
    def u(self) -> np.ndarray:
        r = self.column("r")
        return r**self.m * self.column("g")


def _check_amplitude(alpha: float, m: int) -> None:
    if not (alpha > 0 and math.isfinite(alpha)):
        raise BadParamsError(f"alpha must be positive and finite, got {alpha}")
    if int(m) != m or m < 0:
        raise BadParamsError(f"m must be a non-negative integer, got {m}")


def series_start(alpha: float, m: int, r_start: float) -> OdeState:
    """Taylor state at ``r_start`` from the regular expansion at the origin.

    g = alpha (1 - r^2 / (4(m+1))), W = alpha^2 r^(2m+2) / (4(m+1)^2); the
    running integrals use the leading density u^2 = alpha^2 r^(2m).
    """
    _check_amplitude(alpha, m)
    if not r_start > 0:
        raise BadParamsError(f"r_start must be positive, got {r_start}")
    r = float(r_start)
    k = 2 * m + 2
    g = alpha * (1.0 - r * r / (2.0 * k))
    gp = -alpha * r / k
    rk = r**k
    W = alpha * alpha * rk / (k * k)
    Wp = alpha * alpha * rk / (k * r)
    jn = alpha * alpha * rk / k
    ji = alpha * alpha * rk * (math.log(r) / k - 1.0 / (k * k))
    return OdeState(r, g, gp, W, Wp, jn, ji)


def origin_state(alpha: float, m: int) -> OdeState:
    _check_amplitude(alpha, m)
    return OdeState(0.0, float(alpha), 0.0, 0.0, 0.0, 0.0, 0.0)


def _rhs(r, y, m):
    g, gp, W, Wp = y[0], y[1], y[2], y[3]
    u2 = r ** (2 * m) * g * g
    return [
        gp,
        (W - 1.0) * g - (2 * m + 1) / r * gp,
        Wp,
        u2 - Wp / r,
        u2 * r,
        u2 * r * math.log(r),
    ]


def integrate_universal(alpha: float, m: int, config: IntegratorConfig | None = None) -> TrajectoryOutcome:
    """Shoot from the origin with amplitude ``alpha`` until a terminal event.

    Raises:
        NoEventError: r_max reached with no classification.
        StepUnderflowError: the adaptive step collapsed.
    """
    config = config or IntegratorConfig()
    _check_amplitude(alpha, m)
    # the series needs alpha * r^(m+1) << 1
    r0 = min(config.r_start, 1e-2 / max(1.0, alpha) ** (1.0 / (m + 1)))
    y0 = series_start(alpha, m, r0).as_array()[1:]

    blow = config.blowup_threshold * alpha
    decay = config.decay_threshold * alpha

    def crossed(r, y, m):
        return y[0]

    def blew(r, y, m):
        return abs(y[0]) - blow

    def decayed(r, y, m):
        # small g alone is not enough: a steep g' still carries it through zero
        return max(y[0] - decay, abs(y[1]) - decay, 1.0 - y[2])

    for ev in (crossed, blew, decayed):
        ev.terminal = True
    crossed.direction = -1.0
    blew.direction = 1.0
    decayed.direction = -1.0

    # f is ~ u / r^m, so its tail sits far below abs_tol for large m
    g_tol = config.abs_tol * alpha * 20.0 ** (-m)
    atol = np.array([g_tol, g_tol] + [config.abs_tol] * 4)
    sol = solve_ivp(
        _rhs,
        (r0, config.r_max),
        y0,
        method="DOP853",
        rtol=config.rel_tol,
        atol=atol,
        events=[crossed, blew, decayed],
        dense_output=True,
        args=(m,),
    )
    if sol.status == -1:
        raise StepUnderflowError(f"alpha={alpha!r}, m={m}: {sol.message}")

    kinds = (Outcome.CROSSED_ZERO, Outcome.BLEW_UP, Outcome.DECAYED)
    hits = [(t[0], k, y[0]) for t, k, y in zip(sol.t_events, kinds, sol.y_events) if t.size]
    if not hits:
        raise NoEventError(f"alpha={alpha!r}, m={m}: no terminal event before r_max={config.r_max}")
    r_event, kind, y_event = min(hits, key=lambda h: h[0])
    final = OdeState(float(r_event), *(float(v) for v in y_event))

    grid = np.union1d(np.linspace(r0, r_event, config.n_samples), sol.t[sol.t <= r_event])
    body = sol.sol(grid).T
    samples = np.column_stack([grid, body])
    samples[-1] = final.as_array()
    return TrajectoryOutcome(kind, float(r_event), final, samples, float(alpha), int(m))
