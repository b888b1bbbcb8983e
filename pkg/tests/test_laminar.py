import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rotwave import VorticityModel, bernoulli_head, build_laminar, laminar_height
from rotwave.errors import ParameterError
from rotwave.laminar import lambda_floor, laminar_scan

ZERO = VorticityModel.constant(0.0, 1.0)
ONE = VorticityModel.constant(1.0, 1.0)


def test_irrotational_height_is_linear():
    for p in (-1.0, -0.6, -0.25, 0.0):
        assert laminar_height(ZERO, 1.0, p, -1.0) == pytest.approx(p + 1, abs=1e-14)


def test_height_vanishes_at_bed():
    assert laminar_height(ONE, 4.0, -1.0, -1.0) == 0.0


def test_unit_vorticity_depth_closed_form():
    # int_{-1}^0 (4 + 2 s)^{-1/2} ds = [sqrt(4 + 2 s)]_{-1}^0 = 2 - sqrt(2)
    assert laminar_height(ONE, 4.0, 0.0, -1.0) == pytest.approx(2 - math.sqrt(2), rel=1e-13)


@pytest.mark.parametrize("model, lam, expected", [
    (ZERO, 1.0, 20.6),
    (ZERO, 4.0, 13.8),
    (ONE, 4.0, 4 + 19.6 * (2 - math.sqrt(2))),
])
def test_bernoulli_head(model, lam, expected):
    assert bernoulli_head(model, lam, -1.0, 9.8) == pytest.approx(expected, rel=1e-13)


def test_lambda_below_floor_rejected():
    # gamma = 1: Gamma_0 = -1, floor = 2
    assert lambda_floor(ONE, -1.0) == pytest.approx(2.0)
    with pytest.raises(ParameterError):
        laminar_height(ONE, 1.9, 0.0, -1.0)
    with pytest.raises(ParameterError):
        build_laminar(ONE, 2.0, -1.0, 9.8, 10)


def test_build_laminar_irrotational_nodes():
    lf = build_laminar(ZERO, 1.0, -1.0, 9.8, 10)
    np.testing.assert_allclose(lf.h_profile, lf.p + 1, atol=1e-14)
    np.testing.assert_allclose(lf.hp_profile, 1.0)
    assert lf.q_head == pytest.approx(20.6)


@settings(max_examples=30, deadline=None)
@given(st.floats(-2.0, 2.0), st.floats(0.05, 20.0), st.integers(8, 60))
def test_laminar_invariants(omega, excess, n_p):
    m = VorticityModel.constant(omega, 1.0)
    lam = lambda_floor(m, -1.0) + excess
    lf = build_laminar(m, lam, -1.0, 9.8, n_p)
    assert lf.h_profile[0] == 0.0
    assert np.all(np.diff(lf.h_profile) > 0)
    assert np.all(lf.hp_profile > 0)
    assert lf.q_head == pytest.approx(lf.lam + 2 * 9.8 * lf.depth, rel=1e-14)
    assert lf.h_profile[-1] == pytest.approx(lf.depth, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(-1.5, 1.5))
def test_head_is_convex_in_lambda(omega):
    m = VorticityModel.constant(omega, 1.0)
    rows = laminar_scan(m, -1.0, 9.8, lambda_floor(m, -1.0) + 0.05, lambda_floor(m, -1.0) + 10, n=60)
    q = np.array([r[1] for r in rows])
    assert np.all(np.diff(q, 2) > -1e-10)


def test_laminar_scan_rows():
    rows = laminar_scan(ZERO, -1.0, 9.8, 1.0, 4.0, n=4)
    assert len(rows) == 4
    assert rows[0] == pytest.approx((1.0, 20.6, 1.0))
    assert rows[-1] == pytest.approx((4.0, 13.8, 0.5))
