import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from rotwave import VorticityModel, big_gamma, check_amplitude_condition, gamma_at, gamma_extrema
from rotwave.errors import DomainError, ParameterError
from rotwave.vorticity import gamma_prime


@pytest.mark.parametrize("model, psi, expected", [
    (VorticityModel.constant(0.0, 1.0), 0.5, 0.0),
    (VorticityModel.constant(-0.5, 1.0), 0.3, -0.5),
    (VorticityModel.affine(1.0, 2.0, 1.0), 0.25, 1.5),
])
def test_gamma_at_examples(model, psi, expected):
    assert gamma_at(model, psi) == pytest.approx(expected, abs=1e-15)


def test_gamma_at_rejects_out_of_domain():
    m = VorticityModel.constant(1.0, 1.0)
    with pytest.raises(DomainError):
        gamma_at(m, 1.5)
    with pytest.raises(DomainError):
        gamma_at(m, -0.1)


def test_gamma_at_vectorised():
    m = VorticityModel.polynomial([1.0, 0.0, 3.0], 2.0)
    psi = np.linspace(0, 2, 7)
    np.testing.assert_allclose(gamma_at(m, psi), 1 + 3 * psi**2)


def test_big_gamma_constant_is_linear():
    m = VorticityModel.constant(-0.7, 1.0)
    p = np.linspace(-1, 0, 11)
    np.testing.assert_allclose(big_gamma(m, p), -0.7 * p, atol=1e-15)


def test_big_gamma_affine_matches_scipy_quad():
    m = VorticityModel.affine(1.0, 2.0, 1.0)
    oracle, _ = quad(lambda s: 1 - 2 * s, 0.0, -0.5)
    assert oracle == pytest.approx(-0.75)
    assert big_gamma(m, -0.5) == pytest.approx(oracle, rel=1e-13)
    assert big_gamma(m, -0.5, method="quadrature") == pytest.approx(oracle, rel=1e-13)


def test_tabulated_model_is_c1_and_integrates():
    psi = np.linspace(0, 1, 11)
    m = VorticityModel.tabulated(list(zip(psi, -psi**2)), 1.0)
    p = np.linspace(-1, 0, 9)
    np.testing.assert_allclose(big_gamma(m, p), big_gamma(m, p, method="quadrature"), rtol=1e-10, atol=1e-14)
    # the derivative of a pchip interpolant is continuous across the knots
    knot = psi[5]
    assert gamma_prime(m, knot - 1e-9) == pytest.approx(gamma_prime(m, knot + 1e-9), abs=1e-6)


def test_tabulated_rejects_bad_samples():
    with pytest.raises(ParameterError):
        VorticityModel.tabulated([(0.0, 1.0), (0.5, 1.0)], 1.0)
    with pytest.raises(ParameterError):
        VorticityModel.tabulated([(0.0, 1.0), (0.0, 2.0), (1.0, 1.0)], 1.0)


def test_unknown_kind():
    with pytest.raises(ParameterError):
        VorticityModel("spline", (1.0,), 1.0)


@pytest.mark.parametrize("omega, expected", [(0.0, (0.0, 0.0)), (1.0, (-1.0, 0.0)), (-1.0, (0.0, 1.0))])
def test_gamma_extrema_linear(omega, expected):
    assert gamma_extrema(VorticityModel.constant(omega, 1.0), -1.0) == pytest.approx(expected, abs=1e-14)


def test_gamma_extrema_interior_minimum():
    # gamma(psi) = 1 - 2 psi gives Gamma(p) = p + p^2, minimum -1/4 at p = -1/2
    g0, g1 = gamma_extrema(VorticityModel.affine(1.0, -2.0, 1.0), -1.0)
    assert g0 == pytest.approx(-0.25, abs=1e-13)
    assert g1 == pytest.approx(0.0, abs=1e-13)


def test_amplitude_condition_examples():
    r = check_amplitude_condition(VorticityModel.constant(0.0, 1.0), -1.0, 9.8)
    assert r.condition_lhs == 0.0 and r.condition_rhs == pytest.approx(9.8) and r.admissible
    assert check_amplitude_condition(VorticityModel.constant(-0.5, 1.0), -1.0, 9.8).favorable
    adverse = check_amplitude_condition(VorticityModel.polynomial([0.0, 1.0], 1.0), -1.0, 9.8)
    assert not adverse.favorable


def test_amplitude_condition_constant_closed_form():
    # gamma = w < 0: Gamma = -w p, Gamma_0 = 0, 2Gamma - 2Gamma_0 = 2|w||p|
    w = -0.5
    r = check_amplitude_condition(VorticityModel.constant(w, 1.0), -1.0, 9.8)
    f = lambda p: (p + 1) ** 2 * np.sqrt(-2 * w * -p) + (-2 * w * -p) ** 1.5
    oracle, _ = quad(f, -1.0, 0.0, epsabs=1e-14, epsrel=1e-13)
    assert r.condition_lhs == pytest.approx(oracle, rel=1e-9)


coeffs = st.lists(st.floats(-3, 3, allow_nan=False), min_size=1, max_size=4)
depths = st.floats(0.2, 3.0)


@settings(max_examples=40, deadline=None)
@given(coeffs, depths)
def test_big_gamma_vanishes_at_zero(c, depth):
    assert big_gamma(VorticityModel.polynomial(c, depth), 0.0) == 0.0


@settings(max_examples=30, deadline=None)
@given(coeffs, depths)
def test_closed_form_matches_quadrature(c, depth):
    m = VorticityModel.polynomial(c, depth)
    p = np.linspace(-depth, 0, 5)
    np.testing.assert_allclose(big_gamma(m, p), big_gamma(m, p, method="quadrature"),
                               rtol=1e-10, atol=1e-12 * (1 + max(map(abs, c))) * depth)


@settings(max_examples=30, deadline=None)
@given(coeffs, depths)
def test_extrema_bracket_fine_samples(c, depth):
    m = VorticityModel.polynomial(c, depth)
    g0, g1 = gamma_extrema(m, -depth)
    vals = big_gamma(m, np.linspace(-depth, 0, 20011))
    slack = 1e-12 * (1 + np.max(np.abs(vals)))
    assert g0 <= 0.0 <= g1
    assert np.all(vals >= g0 - slack) and np.all(vals <= g1 + slack)


@settings(max_examples=30, deadline=None)
@given(coeffs, st.floats(0.1, 50.0), st.floats(1.0, 10.0))
def test_admissibility_monotone_in_g(c, g, factor):
    m = VorticityModel.polynomial(c, 1.0)
    if check_amplitude_condition(m, -1.0, g).admissible:
        assert check_amplitude_condition(m, -1.0, g * factor).admissible
