import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phibvp import QuadratureConfig, QuadratureError, _fallback
from phibvp.errors import DomainError
from phibvp.quadrature import DEFAULT_QUADRATURE, power_integral, singular_integral

try:
    from phibvp import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled core not built")


def midpoint_I(s, L, inv_p, kappa, n=10**7):
    """Brute-force oracle for p = 2: xi = s -+ u^2 removes the square-root singularity."""
    assert inv_p == 0.5
    D = abs(L - s)
    u = (np.arange(n) + 0.5) * (math.sqrt(D) / n)
    xi = s - u * u if L < s else s + u * u
    # d xi = 2u du and |xi - s|^(1/2) = u
    val = np.sum(2.0 / xi**kappa) * (math.sqrt(D) / n)
    return -val if L < s else val


def test_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(abs_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureConfig(max_levels=2)
    t = DEFAULT_QUADRATURE.tightened(100.0)
    assert t.abs_tol < DEFAULT_QUADRATURE.abs_tol and t.max_levels > DEFAULT_QUADRATURE.max_levels


def test_elementary_gamma_zero():
    # int_{1/3}^1 d xi / sqrt(1 - xi)
    v = power_integral(1.0, 1.0 / 3.0, 1.0, 0.5, 0.0)
    assert -v == pytest.approx(2.0 * math.sqrt(2.0 / 3.0), rel=1e-10)


def test_brute_force_gamma_one():
    # int_{0.75}^1 d xi / (sqrt(1 - xi) sqrt(xi))
    v = -power_integral(1.0, 0.75, 1.0, 0.5, 0.5)
    assert v == pytest.approx(-midpoint_I(1.0, 0.75, 0.5, 0.5), rel=1e-9)
    assert v == pytest.approx(2 * math.asin(1.0) - 2 * math.asin(math.sqrt(0.75)), rel=1e-10)


def test_brute_force_gamma_minus_three():
    # kappa = 3/2, mu (rho + 1) = 5/3 at rho = 4: integral runs upward from 1
    v = power_integral(1.0, 5.0 / 3.0, 1.0, 0.5, 1.5)
    assert v > 0
    assert v == pytest.approx(midpoint_I(1.0, 5.0 / 3.0, 0.5, 1.5), rel=1e-9)


def test_non_convergence_reports_estimates():
    q = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300, max_levels=3)
    with pytest.raises(QuadratureError) as ei:
        power_integral(1.0, 0.5, 1.0, 0.5, 0.3, q)
    assert math.isfinite(ei.value.last) and math.isfinite(ei.value.previous)


@given(
    s=st.floats(0.1, 5.0),
    ratio=st.floats(0.05, 20.0).filter(lambda r: abs(r - 1) > 1e-3),
    inv_p=st.floats(0.0, 0.9),
    kappa=st.floats(-3.0, 3.0),
)
def test_orientation(s, ratio, inv_p, kappa):
    L = s * ratio
    a = power_integral(s, L, 1.0, inv_p, kappa)
    assert math.copysign(1.0, a) == math.copysign(1.0, L - s)


@given(s=st.floats(0.2, 3.0), L=st.floats(0.2, 3.0), A=st.floats(0.1, 10.0), inv_p=st.floats(0.1, 0.8))
def test_scaling_in_A(s, L, A, inv_p):
    if abs(L - s) < 1e-3:
        return
    assert power_integral(s, L, A, inv_p, 0.5) == pytest.approx(
        A**-inv_p * power_integral(s, L, 1.0, inv_p, 0.5), rel=1e-9)


def test_singular_integral_matches_power_integral():
    f = lambda xi, d: 1.0 / (np.sqrt(d) * xi**0.75)
    for s, L in [(1.0, 0.2), (0.5, 40.0), (2.0, 1e-3)]:
        assert singular_integral(f, s, L, 0.5) == pytest.approx(power_integral(s, L, 1.0, 0.5, 0.75), rel=1e-9)


@needs_core
@given(
    s=st.floats(0.05, 5.0),
    ratio=st.floats(0.01, 100.0).filter(lambda r: abs(r - 1) > 1e-4),
    A=st.floats(0.1, 10.0),
    inv_p=st.floats(0.0, 0.9),
    kappa=st.floats(-4.0, 4.0),
)
def test_core_and_fallback_agree(s, ratio, A, inv_p, kappa):
    args = (s, s * ratio, A, inv_p, kappa, 1e-10, 1e-9, 10)
    vc, pc, okc = _core.power_integral(*args)
    vf, pf, okf = _fallback.power_integral(*args)
    assert okc == okf
    assert vc == pytest.approx(vf, rel=1e-13, abs=1e-300)


@needs_core
def test_rk_core_and_fallback_agree():
    times = np.array([0.0, 0.5, 1.0, 2.0, 3.0])
    coefs = np.array([1.0, 1.0, -2.0, -2.0])
    out = []
    for mod in (_core, _fallback):
        xs, ys = np.full(5, np.nan), np.full(5, np.nan)
        r = mod.rk4_path(0.7, 0.0, times, coefs, 1e-3, 3.0, 1, 1.0 / 2.0, 1e-9, xs, ys)
        out.append((r, xs, ys))
    (rc, xc, yc), (rf, xf, yf) = out
    assert rc[:2] == rf[:2]
    np.testing.assert_allclose(xc, xf, rtol=1e-13)
    np.testing.assert_allclose(yc, yf, rtol=1e-13, atol=1e-15)
