import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sn2d.branch import PAPER_APPENDIX
from sn2d.errors import BadParamsError
from sn2d.functionals import kinetic
from sn2d.hls import builtin_profile, dilation_scan, hls_check, sharp_constant
from sn2d.io import write_profile_csv


def test_constant_check_published_value():
    assert sharp_constant(PAPER_APPENDIX) == pytest.approx(-0.0084, abs=2e-4)
    rep = hls_check(builtin_profile("GAUSSIAN"), PAPER_APPENDIX)
    assert rep.constant_check == sharp_constant(PAPER_APPENDIX)


def test_constant_check_computed(consts):
    assert sharp_constant(consts) == pytest.approx(-0.0084, abs=2e-4)


def test_gaussian_has_positive_slack(consts):
    rep = hls_check(builtin_profile("GAUSSIAN", lam=1.0, width=1.0), consts)
    assert rep.slack_sharp > 1e-4
    assert rep.slack_weak > rep.slack_sharp
    assert rep.lhs == -rep.v_value


def test_sharp_bound_is_stronger_by_constant(consts):
    rep = hls_check(builtin_profile("EXPONENTIAL", lam=3.0, width=0.7), consts)
    assert rep.rhs_weak - rep.rhs_sharp == pytest.approx(-sharp_constant(consts) * 9.0, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(
    kind=st.sampled_from(["GAUSSIAN", "EXPONENTIAL"]),
    lam=st.floats(0.1, 100.0),
    log_width=st.floats(math.log(0.1), math.log(10.0)),
)
def test_family_respects_sharp_bound(kind, lam, log_width, consts):
    rep = hls_check(builtin_profile(kind, lam=lam, width=math.exp(log_width)), consts)
    assert rep.lam == pytest.approx(lam, rel=1e-12)
    assert rep.slack_sharp >= -1e-6 * lam**2
    assert rep.slack_weak >= rep.slack_sharp


@settings(max_examples=20, deadline=None)
@given(c=st.floats(0.2, 5.0), sigma=st.floats(0.2, 5.0))
def test_slack_is_scale_and_dilation_invariant(c, sigma, consts):
    base = builtin_profile("EXPONENTIAL", lam=1.0, width=1.0)
    ref = hls_check(base, consts).slack_sharp
    moved = base.scaled(c).dilated(sigma)
    assert hls_check(moved, consts).slack_sharp / moved.lam**2 == pytest.approx(ref, rel=1e-8)


def test_ground_state_saturates(consts):
    lam = consts.lambda0
    scan = dilation_scan(builtin_profile("GROUND_STATE", lam=lam), np.linspace(0.5, 2.0, 7), consts)
    assert abs(scan.best.slack_sharp) <= 1e-6 * lam**2
    assert scan.best.slack_sharp <= 1e-3 * lam**2
    # the slack does not depend on sigma at all, so the scan is flat
    assert np.ptp(scan.slacks) <= 1e-8 * lam**2


def test_gaussian_scan_is_flat_and_positive(consts):
    scan = dilation_scan(builtin_profile("GAUSSIAN"), [0.5, 0.75, 1.0, 1.5, 2.0], consts)
    assert np.all(scan.slacks > 1e-4)
    assert np.ptp(scan.slacks) <= 1e-9


def test_ground_state_profile_kinetic(consts):
    p = builtin_profile("GROUND_STATE", lam=PAPER_APPENDIX.lambda0)
    assert kinetic(p) == pytest.approx(PAPER_APPENDIX.lambda0**2 / (8 * math.pi), rel=5e-3)


def test_table_pass_through(tmp_path):
    src = builtin_profile("EXPONENTIAL", lam=2.0, width=0.5)
    path = tmp_path / "t.csv"
    write_profile_csv(path, src)
    p = builtin_profile("TABLE", path=str(path))
    assert np.array_equal(p.grid, src.grid) and np.array_equal(p.values, src.values)


@pytest.mark.parametrize(
    "kind,params",
    [
        ("SQUARE", {}),
        ("GAUSSIAN", {"lam": -1.0}),
        ("GAUSSIAN", {"points": 100}),
        ("EXPONENTIAL", {"extent": 5.0}),
        ("GAUSSIAN", {"width": 0.0}),
        ("GROUND_STATE", {"gamma": 0.0}),
        ("TABLE", {}),
    ],
)
def test_bad_params(kind, params):
    with pytest.raises(BadParamsError) as exc:
        builtin_profile(kind, **params)
    assert exc.value.code == "BAD_PARAMS"


def test_bad_sigma_grid():
    with pytest.raises(BadParamsError):
        dilation_scan(builtin_profile("GAUSSIAN"), [1.0, -1.0])


def test_report_dict_keys():
    d = hls_check(builtin_profile("GAUSSIAN")).to_dict()
    assert list(d)[0] == "lambda" and "lam" not in d
