import math
from unittest import mock

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from sn2d.errors import BadParamsError, NoEventError, StepUnderflowError
from sn2d.radial_ode import (
    STATE_FIELDS,
    IntegratorConfig,
    OdeState,
    Outcome,
    integrate_universal,
    origin_state,
    series_start,
)


def reference_state(alpha, m, r_end, r_begin=1e-6):
    """Integrate u'' + u'/r - m^2 u/r^2 = (W-1) u, (r W')' = r u^2 in the u variable."""

    def rhs(r, y):
        u, up, W, Wp = y
        return [up, (W - 1.0) * u - up / r + m * m * u / (r * r), Wp, u * u - Wp / r]

    k = 2 * m + 2
    r = r_begin
    u0 = alpha * r**m * (1.0 - r * r / (2 * k))
    up0 = alpha * (m * r ** (m - 1) if m else 0.0) - alpha * (m + 2) * r ** (m + 1) / (2 * k)
    W0 = alpha**2 * r**k / k**2
    Wp0 = alpha**2 * r ** (k - 1) / k
    sol = solve_ivp(rhs, (r, r_end), [u0, up0, W0, Wp0], method="DOP853", rtol=1e-13, atol=1e-40)
    return sol.y[:, -1]


@pytest.mark.parametrize("m", [0, 1, 2])
def test_series_start_matches_reference_integration(m):
    alpha, r1 = 1.2, 1e-3
    ref = reference_state(alpha, m, r1)
    s = series_start(alpha, m, r1)
    u = r1**m * s.g
    assert abs(u - ref[0]) <= 1e-10 * abs(ref[0])
    # W drops its O(r^2) relative correction
    assert abs(s.W - ref[2]) <= 10 * r1**2 * abs(ref[2])


def test_series_start_limits_at_origin():
    s = series_start(2.0, 0, 1e-12)
    assert s.g == pytest.approx(2.0, rel=1e-15)
    assert abs(s.gp) < 1e-11 and s.W < 1e-20 and s.jn < 1e-20
    o = origin_state(2.0, 3)
    assert o.as_array().tolist() == [0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    assert OdeState.from_array(s.as_array()) == s


@pytest.mark.parametrize("alpha,m,r", [(0.0, 0, 1e-4), (-1.0, 0, 1e-4), (1.0, -1, 1e-4), (1.0, 0, 0.0)])
def test_series_start_rejects_bad_params(alpha, m, r):
    with pytest.raises(BadParamsError):
        series_start(alpha, m, r)


def test_orientation_scan():
    kinds = {a: integrate_universal(a, 0).kind for a in (1e-3, 0.01, 0.1, 1.0, 10.0, 1e3)}
    for a in (1e-3, 0.01, 0.1, 1.0):
        assert kinds[a] is Outcome.CROSSED_ZERO
    for a in (10.0, 1e3):
        assert kinds[a] is Outcome.BLEW_UP


@pytest.mark.parametrize("alpha", [0.5, 1.2, 3.0])
def test_trajectory_bookkeeping(alpha):
    out = integrate_universal(alpha, 0)
    r, Wp, jn, W = out.column("r"), out.column("Wp"), out.column("jn"), out.column("W")
    # (r W')' = r u^2 integrates to r W' = jn exactly
    assert np.max(np.abs(r * Wp - jn)) <= 1e-8 * jn[-1]
    assert np.all(np.diff(jn) >= -1e-15) and np.all(np.diff(W) >= -1e-15)
    assert out.samples.shape[1] == len(STATE_FIELDS)
    assert np.all(np.diff(r) > 0)


def test_event_values():
    out = integrate_universal(0.5, 0)
    assert abs(out.final_state.g) < 1e-9 * 0.5
    cfg = IntegratorConfig()
    out = integrate_universal(5.0, 0)
    assert out.final_state.g == pytest.approx(cfg.blowup_threshold * 5.0, rel=1e-9)


def test_higher_m_profile_vanishes_at_origin():
    out = integrate_universal(0.5, 2)
    assert out.u[0] < 1e-7
    assert np.all(np.isfinite(out.samples))


def test_no_event_before_rmax():
    with pytest.raises(NoEventError) as exc:
        integrate_universal(1.2, 0, IntegratorConfig(r_max=0.5))
    assert exc.value.code == "NO_EVENT"


def test_step_underflow_is_reported():
    fake = mock.Mock(status=-1, message="Required step size is less than spacing between numbers.")
    with mock.patch("sn2d.radial_ode.solve_ivp", return_value=fake):
        with pytest.raises(StepUnderflowError):
            integrate_universal(1.0, 0)


@pytest.mark.parametrize("kw", [dict(rel_tol=0.0), dict(abs_tol=-1.0), dict(r_max=0.0), dict(n_samples=1)])
def test_config_validation(kw):
    with pytest.raises(BadParamsError):
        IntegratorConfig(**kw)


def test_refined_config():
    c = IntegratorConfig().refined(0.5)
    assert c.rel_tol == pytest.approx(5e-11) and c.abs_tol == pytest.approx(5e-13)


@settings(max_examples=20, deadline=None)
@given(log_alpha=st.floats(math.log(0.01), math.log(100.0)), m=st.integers(0, 3))
def test_trajectory_invariants(log_alpha, m):
    alpha = math.exp(log_alpha)
    out = integrate_universal(alpha, m)
    assert out.kind in (Outcome.CROSSED_ZERO, Outcome.BLEW_UP, Outcome.DECAYED)
    assert np.all(out.column("Wp") >= -1e-15)
    assert np.all(np.diff(out.column("jn")) >= -1e-15)
    g = out.column("g")
    if out.kind is Outcome.CROSSED_ZERO:
        assert np.all(g[:-1] > -1e-9 * alpha)
    if out.kind is Outcome.BLEW_UP:
        assert g[-1] > alpha
