import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phibvp import DomainError, KernelKind, make_operator
from phibvp.operators import CaseClass, PowerNonlinearity, classify_nonlinearity

ps = st.floats(1.2, 6.0)
pos = st.floats(1e-3, 1e3)


def test_plaplacian_p2_value():
    assert make_operator("plaplacian", 2.0).L_h(2.0) == pytest.approx(-2.0, abs=1e-15)


def test_minkowski_zero():
    assert make_operator("minkowski").L_h(0.0) == 0.0


def test_plaplacian_p3_value():
    k = make_operator(KernelKind.PLAPLACIAN, 3.0)
    assert k.L_h(1.0) == pytest.approx(-(1.5 ** (1 / 3)), rel=1e-15)
    assert k.L_h(1.0) == pytest.approx(-1.144714, abs=1e-6)


def test_p3_left_inverse_by_root_finding():
    from scipy.optimize import brentq

    k = make_operator("plaplacian", 3.0)
    y = brentq(lambda v: k.H(v) - 1.0, -10.0, 0.0, xtol=1e-15)
    assert float(k.h(y)) == pytest.approx(float(k.L_h(1.0)), rel=1e-12)


@pytest.mark.parametrize("p", [None, 1.0, 0.5, float("nan")])
def test_plaplacian_needs_p_above_one(p):
    with pytest.raises(DomainError):
        make_operator("plaplacian", p)


def test_minkowski_phi_domain():
    with pytest.raises(DomainError):
        make_operator("minkowski").phi(1.0)


@pytest.mark.parametrize("gamma,case", [(3.0, CaseClass.CASE_I), (-3.0, CaseClass.CASE_IV), (0.5, CaseClass.CASE_I)])
def test_case_classes(gamma, case):
    assert classify_nonlinearity(gamma) is case


def test_gamma_minus_one_rejected():
    with pytest.raises(DomainError):
        PowerNonlinearity(-1.0)


@given(p=ps, y=st.floats(-50, 50))
def test_plaplacian_h_inverts_phi(p, y):
    k = make_operator("plaplacian", p)
    assert float(k.h(k.phi(y))) == pytest.approx(y, rel=1e-12, abs=1e-12)


@given(p=ps, xi=pos)
def test_H_inverse_branches(p, xi):
    k = make_operator("plaplacian", p)
    r, l = float(k.H_r_inv(xi)), float(k.H_l_inv(xi))
    assert r > 0 > l
    assert float(k.H(r)) == pytest.approx(xi, rel=1e-12)
    assert float(k.H(l)) == pytest.approx(xi, rel=1e-12)


@given(p=ps, xi=pos)
def test_L_h_is_h_of_left_inverse(p, xi):
    k = make_operator("plaplacian", p)
    assert float(k.L_h(xi)) == pytest.approx(float(k.h(k.H_l_inv(xi))), rel=1e-12)


@given(xi=pos)
def test_minkowski_L_h(xi):
    k = make_operator("minkowski")
    assert float(k.L_h(xi)) == pytest.approx(float(k.h(k.H_l_inv(xi))), rel=1e-12)
    assert -1.0 < float(k.L_h(xi)) < 0.0


@given(y=st.floats(-20.0, 20.0))
def test_minkowski_H_is_primitive_of_h(y):
    k = make_operator("minkowski")
    eps = 1e-6
    num = (float(k.H(y + eps)) - float(k.H(y - eps))) / (2 * eps)
    assert num == pytest.approx(float(k.h(y)), abs=1e-8)


def test_linear_matches_p2():
    lin, pl = make_operator("linear"), make_operator("plaplacian", 2.0)
    xs = np.linspace(0, 5, 11)
    np.testing.assert_allclose(lin.L_h(xs), pl.L_h(xs), rtol=1e-15)
    assert lin.c_p == pytest.approx(math.sqrt(2.0))


@given(gamma=st.floats(-8, 8).filter(lambda g: abs(g + 1) > 1e-2), x=pos)
def test_G_roundtrip_and_sign(gamma, x):
    nl = PowerNonlinearity(gamma)
    G = float(nl.G(x))
    assert math.copysign(1.0, G) == nl.sign
    assert float(nl.G_inv(G)) == pytest.approx(x, rel=1e-10)


@given(gamma=st.floats(-8, 8).filter(lambda g: abs(g + 1) > 1e-2), x=pos)
def test_L_g_composes_to_g(gamma, x):
    nl = PowerNonlinearity(gamma)
    assert float(nl.L_g(nl.G(x))) == pytest.approx(float(nl.g(x)), rel=1e-10)


def test_G_inv_range_checked():
    with pytest.raises(DomainError):
        PowerNonlinearity(3.0).G_inv(-1.0)
    with pytest.raises(DomainError):
        PowerNonlinearity(-3.0).G_inv(1.0)
