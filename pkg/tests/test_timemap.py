import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phibvp import DomainError, UnsupportedError, make_problem
from phibvp.quadrature import QuadratureConfig
from phibvp.timemap import (
    K0, F_curve, F_limits, F_quotient, RhoSide, dI1_drho, dI2_drho, generic_M, integral_I1, integral_I2,
    reduced_maps, rho_domain,
)


def spec_of(gamma, a_plus=1.0, a_minus=2.0, p=2.0, kernel=None):
    return make_problem(gamma, a_plus, a_minus, 1.0, 3.0, p=p, kernel=kernel)


@pytest.mark.parametrize("gamma,side,lo,hi", [
    (0.5, RhoSide.BELOW_RATIO, 0.0, 2.0),
    (-0.5, RhoSide.BELOW_RATIO, 0.0, 2.0),
    (-3.0, RhoSide.ABOVE_RATIO, 2.0, math.inf),
])
def test_rho_domain(gamma, side, lo, hi):
    d = rho_domain(spec_of(gamma))
    assert (d.side, d.lower, d.upper) == (side, lo, hi)


def test_I1_gamma_zero_small_rho():
    s = spec_of(0.0)
    # mu (rho + 1) -> 1/3 as rho -> 0
    assert integral_I1(1e-13, s) == pytest.approx(2 * math.sqrt(2.0 / 3.0), rel=1e-9)


def test_I2_gamma_zero_elementary():
    assert integral_I2(1.0, spec_of(0.0)) == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-10)


@pytest.mark.parametrize("gamma", [-3.0, -2.0, 0.5, 3.0])
def test_signs_follow_gamma_plus_one(gamma):
    s = spec_of(gamma)
    rho = 4.0 if gamma < -1 else 0.7
    sg = math.copysign(1.0, gamma + 1.0)
    assert math.copysign(1.0, integral_I1(rho, s)) == sg
    assert math.copysign(1.0, integral_I2(rho, s)) == sg


def test_gamma_minus_three_ratio_constant():
    s = spec_of(-3.0)
    r = [integral_I2(rho, s) / integral_I1(rho, s) for rho in (2.5, 4.0, 9.0, 50.0)]
    np.testing.assert_allclose(r, r[0], rtol=1e-9)


def test_I2_blows_up_at_zero_for_gamma_one():
    s = spec_of(1.0)
    # logarithmic growth: equal increments per factor 100 in rho
    vals = np.array([integral_I2(rho, s) for rho in (1e-2, 1e-4, 1e-6, 1e-8, 1e-12)])
    steps = np.diff(vals[:4])
    np.testing.assert_allclose(steps, 2 * math.log(100) / math.sqrt(2) / 2, rtol=2e-2)
    assert vals[-1] > vals[-2] + steps[-1]


def test_reference_values():
    assert F_quotient(1.0, spec_of(-0.4)) == pytest.approx(2.73439, abs=5e-4)
    assert F_quotient(10.0, spec_of(-2.0)) == pytest.approx(18.1801, abs=5e-3)
    assert F_quotient(7.0, spec_of(-3.0)) == pytest.approx(7.0, abs=1e-8)
    for rho in (1e-3, 0.3, 1.0, 1.9):
        assert F_quotient(rho, spec_of(0.0)) == pytest.approx(2.0, abs=1e-8)


@pytest.mark.parametrize("rho", [0.0, 2.0, 3.0, -1.0, float("nan")])
def test_outside_domain(rho):
    with pytest.raises(DomainError):
        F_quotient(rho, spec_of(0.5))


def test_minkowski_unsupported():
    with pytest.raises(UnsupportedError):
        F_quotient(0.5, spec_of(3.0, kernel="minkowski"))


def test_limits():
    assert F_limits(spec_of(5.0)) == (2.0, 0.0)
    assert F_limits(spec_of(-3.0)) == (2.0, math.inf)
    at, far = F_limits(spec_of(0.2))
    assert at == 2.0 and far == pytest.approx(K0(0.2, 1.0, 2.0), rel=1e-12)
    with pytest.raises(UnsupportedError):
        F_limits(spec_of(0.5, p=3.0))


def test_K0_formula_against_small_rho():
    # the figure intercept for gamma = 0.2 reads 1.16883; the formula gives 1.16686
    assert K0(0.2, 1.0, 2.0) == pytest.approx(1.16883, abs=5e-3)
    # F - K0 decays like rho^(1/3) here
    k0 = K0(0.2, 1.0, 2.0)
    gaps = [F_quotient(r, spec_of(0.2)) - k0 for r in (1e-9, 1e-12, 1e-18)]
    assert gaps[0] > gaps[1] > gaps[2] > 0
    assert gaps[2] < 1e-5


def test_K0_values():
    assert K0(0.0, 1.0, 2.0) == pytest.approx(2.0, rel=1e-12)
    assert K0(-0.4, 1.0, 2.0) == pytest.approx(8.14276, abs=1e-3)
    assert K0(-0.5, 1.0, 1.0) == pytest.approx(5.0, rel=1e-10)
    for g in (-1.0, 1.0, 2.0):
        with pytest.raises(DomainError):
            K0(g, 1.0, 2.0)


def test_K0_decreasing():
    vals = [K0(g, 1.0, 2.0) for g in np.linspace(-0.95, 0.95, 50)]
    assert np.all(np.diff(vals) < 0)


@pytest.mark.parametrize("gamma", [-5.0, -3.0, 2.0, 4.0])
@pytest.mark.parametrize("ap,am", [(1.0, 2.0), (3.0, 1.0)])
def test_monotone_increasing(gamma, ap, am):
    s = spec_of(gamma, ap, am)
    r = am / ap
    rhos = r * (1 + np.geomspace(1e-6, 1e3, 200)) if gamma < -1 else r * np.linspace(0.0, 1.0, 202)[1:-1]
    assert np.all(np.diff(F_curve(rhos, s)) > 0)


@pytest.mark.parametrize("gamma,rho", [(3.0, 0.7), (-3.0, 5.0), (0.5, 1.2), (1.5, 0.3)])
@pytest.mark.parametrize("p", [2.0, 3.0])
def test_closed_form_derivatives(gamma, rho, p):
    s = spec_of(gamma, p=p)
    q = QuadratureConfig().tightened(1e4)
    h = 1e-3 * rho

    def cd(f):
        return (-f(rho + 2 * h) + 8 * f(rho + h) - 8 * f(rho - h) + f(rho - 2 * h)) / (12 * h)

    assert cd(lambda r: integral_I1(r, s, q)) == pytest.approx(dI1_drho(rho, s), rel=1e-7)
    assert cd(lambda r: integral_I2(r, s, q)) == pytest.approx(dI2_drho(rho, s), rel=1e-7)


@pytest.mark.parametrize("gamma", [-3.0, -2.0, -0.4, 0.8, 3.0])
@pytest.mark.parametrize("sgn", [-1.0, 1.0])
def test_ratio_end_limit(gamma, sgn):
    s = spec_of(gamma)
    rho = 2.0 * (1 + sgn * 1e-4)
    if not rho_domain(s).contains(rho):
        return
    assert F_quotient(rho, s) == pytest.approx(F_limits(s)[0], abs=1e-2)


@given(c=st.floats(0.01, 100.0), gamma=st.sampled_from([-3.0, -1.5, -0.4, 0.6, 3.0]), u=st.floats(0.05, 0.95))
def test_scaling_invariance(c, gamma, u):
    base = spec_of(gamma)
    rho = 2.0 * u if gamma > -1 else 2.0 / u
    scaled = spec_of(gamma, c * 1.0, c * 2.0)
    assert F_quotient(rho, scaled) == pytest.approx(F_quotient(rho, base), rel=1e-8)


@given(gamma=st.sampled_from([-3.0, -0.4, 0.6, 3.0]), u=st.floats(0.05, 0.95))
def test_p2_plaplacian_equals_linear(gamma, u):
    rho = 2.0 * u if gamma > -1 else 2.0 / u
    a = F_quotient(rho, spec_of(gamma, kernel="linear"))
    b = F_quotient(rho, spec_of(gamma, kernel="plaplacian"))
    assert a == pytest.approx(b, rel=1e-10)


@pytest.mark.parametrize("gamma,omega,rho", [(1.0, 0.3, 0.8), (3.0, 0.05, 0.4), (-3.0, -2.0, 3.0)])
def test_generic_M_matches_reduced_maps(gamma, omega, rho):
    s = spec_of(gamma)
    sigma = 0.5 * omega * rho
    m = generic_M(omega, sigma, s)
    f = reduced_maps(omega, rho, s)
    np.testing.assert_allclose(m, f, rtol=1e-8)


def test_reduced_maps_factor_through_I1_I2():
    s = spec_of(3.0)
    omega, rho = 0.2, 0.6
    f1, f2 = reduced_maps(omega, rho, s)
    k = s.kernel.c_p * abs(s.gamma + 1) ** s.nonlinearity.kappa
    scale = abs(omega) ** (1 - s.nonlinearity.kappa - 0.5) / k
    assert f1 == pytest.approx(scale * integral_I1(rho, s), rel=1e-8)
    assert f2 == pytest.approx(scale * rho ** (-s.nonlinearity.kappa + 0.5) * integral_I2(rho, s), rel=1e-8)


def test_generic_M_minkowski_finite():
    s = spec_of(3.0, kernel="minkowski")
    omega = float(s.nonlinearity.G(0.2))
    m1, m2 = generic_M(omega, 0.3 * omega, s)
    assert 0 < m1 < math.inf and 0 < m2 < math.inf
    # brute-force panel quadrature oracle for the first map
    from scipy.integrate import quad

    mid = s.weight.mu * omega + (1 - s.weight.mu) * 0.3 * omega
    ref, _ = quad(lambda th: 1.0 / (-float(s.kernel.L_h(omega - th)) * float(s.nonlinearity.L_g(th))),
                  mid, omega, limit=400)
    assert m1 == pytest.approx(ref, rel=1e-6)


def test_generic_M_outside_open_set():
    with pytest.raises(DomainError):
        generic_M(0.3, 0.3, spec_of(3.0))
