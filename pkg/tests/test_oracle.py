import math
import warnings

import numpy as np
import pytest

from sn2d.branch import e0_of_lambda, rescale_to_physical
from sn2d.errors import BadParamsError
from sn2d.oracle import (
    Grid,
    GridConfig,
    NotConvergedWarning,
    OptConfig,
    gradient_selftest,
    minimize_energy,
)


def l2_distance(result, sol, lam, gamma):
    p = rescale_to_physical(sol, lam, gamma).profile
    x = result.profile.grid
    ref = np.where(x < p.grid[-1], p(np.minimum(x, p.grid[-1])), 0.0)
    w = 2.0 * math.pi * x * (x[1] - x[0])
    return math.sqrt(np.sum(w * (result.profile.values - ref) ** 2))


@pytest.mark.parametrize("lam,gamma", [(10.0, 1.0), (None, 1.0), (1.0, 10.0), (46.0, 1e-8)])
def test_oracle_matches_branch(lam, gamma, sol0, consts):
    lam = lam or consts.lambda0
    res = minimize_energy(lam, gamma)
    assert res.converged
    e0 = e0_of_lambda(lam, gamma, consts)
    assert abs(res.energy / e0 - 1) <= 1e-3
    assert l2_distance(res, sol0, lam, gamma) <= 1e-2 * math.sqrt(lam)
    assert res.t_value == pytest.approx(gamma * lam**2 / (8 * math.pi), rel=1e-3)


def test_energy_descends_and_mass_is_kept():
    res = minimize_energy(20.0, 1.0)
    assert np.all(np.diff(res.history) <= 0)
    assert res.profile.values.min() >= 0
    g = Grid(1024, res.profile.grid[-1] + 0.5 * (res.profile.grid[1] - res.profile.grid[0]))
    assert g.mass(res.profile.values) == pytest.approx(20.0, rel=1e-12)


def test_not_converged_warns():
    with pytest.warns(NotConvergedWarning):
        res = minimize_energy(10.0, 1.0, opt_config=OptConfig(max_iter=2))
    assert not res.converged
    assert res.summary()["converged"] is False


def test_thread_count_does_not_change_result(monkeypatch):
    a = minimize_energy(5.0, 1.0)
    monkeypatch.setenv("SN2D_THREADS", "3")
    b = minimize_energy(5.0, 1.0)
    assert a.energy == b.energy and np.array_equal(a.profile.values, b.profile.values)


@pytest.mark.parametrize("terms", ["energy", "kinetic", "potential"])
def test_gradient_selftest(terms):
    assert gradient_selftest(terms=terms) <= 1e-5


def test_gradient_selftest_small_grid_other_gamma():
    assert gradient_selftest(GridConfig(points=64, extent=10.0), n_profiles=5, gamma=3.0, seed=7) <= 1e-6


def test_discrete_functionals_on_gaussian():
    # u = pi^-1/2 exp(-r^2/2) has N = 1, T = 1
    g = Grid(4096, 12.0)
    u = np.exp(-0.5 * g.r**2) / math.sqrt(math.pi)
    assert g.mass(u) == pytest.approx(1.0, rel=1e-6)
    assert g.kinetic(u) == pytest.approx(1.0, rel=1e-3)
    assert g.potential(u) == pytest.approx((math.log(2.0) - 0.5772156649015329) / (4 * math.pi), abs=1e-5)


def test_bad_arguments():
    with pytest.raises(BadParamsError):
        minimize_energy(-1.0)
    with pytest.raises(BadParamsError):
        minimize_energy(1.0, 0.0)
    with pytest.raises(BadParamsError):
        minimize_energy(1.0, grid_config=GridConfig(points=4))
    with pytest.raises(BadParamsError):
        gradient_selftest(terms="bogus")


def test_quiet_when_converged():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        minimize_energy(3.0, 2.0)
