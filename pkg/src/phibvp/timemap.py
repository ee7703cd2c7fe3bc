"""Time-map integrals of the reduced two-equation system.

For the homogeneous kernels (linear and p-Laplacian) the reduced maps
factor into a power of omega times the one-dimensional integrals

    I1(rho) = int_{mu(rho+1)}^{1} dxi / (|a+ - a+ xi|^(1/p) |xi|^kappa)
    I2(rho) = int_{a+/a-}^{mu(rho+1)/rho} dxi / (|a- xi - a+|^(1/p) |xi|^kappa)

with ``kappa = gamma/(gamma+1)`` and ``mu = a+/(a+ + a-)``.  Both are
oriented, so they are negative when gamma < -1.  The quotient

    F(rho) = rho^(-1 + kappa + 1/p) * I1(rho) / I2(rho)

carries the whole existence question.  ``reduced_maps`` and ``generic_M``
evaluate the unfactored maps for any kernel through ``L_h`` and ``L_g``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedError
from .operators import KernelKind
from .problem import ProblemSpec
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, power_integral, singular_integral

# rho closer than this to a-/a+ is refused; use F_limits there
RATIO_GUARD = 1e-12


class RhoSide(str, enum.Enum):
    BELOW_RATIO = "below_ratio"
    ABOVE_RATIO = "above_ratio"


@dataclass(frozen=True)
class RhoDomain:
    lower: float
    upper: float
    side: RhoSide

    def contains(self, rho: float) -> bool:
        return self.lower < rho < self.upper

    def interior(self, rho: float) -> bool:
        """Inside the domain and not numerically on the ratio endpoint."""
        if not self.contains(rho):
            return False
        ratio = self.upper if self.side is RhoSide.BELOW_RATIO else self.lower
        return abs(rho - ratio) > RATIO_GUARD * max(1.0, ratio)


def rho_domain(spec: ProblemSpec) -> RhoDomain:
    r = spec.weight.ratio
    if spec.gamma > -1.0:
        return RhoDomain(0.0, r, RhoSide.BELOW_RATIO)
    return RhoDomain(r, math.inf, RhoSide.ABOVE_RATIO)


def _power_kernel(spec: ProblemSpec) -> None:
    if not spec.kernel.is_power:
        raise UnsupportedError(
            "the factored integrals need a homogeneous kernel; use generic_M / reduced_maps for Minkowski"
        )


def _check_rho(rho: float, spec: ProblemSpec) -> None:
    dom = rho_domain(spec)
    if not (math.isfinite(rho) and dom.interior(rho)):
        raise DomainError(
            f"rho={rho!r} is not strictly inside ]{dom.lower}, {dom.upper}[ for gamma={spec.gamma}"
        )


def integral_I1(rho: float, spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Oriented integral I1(rho); singular at xi = 1."""
    _power_kernel(spec)
    if not rho > 0:
        raise DomainError("I1 needs rho > 0")
    w = spec.weight
    return -power_integral(1.0, w.mu * (rho + 1.0), w.a_plus, 1.0 / spec.p, spec.nonlinearity.kappa, q)


def integral_I2(rho: float, spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Oriented integral I2(rho); singular at xi = a+/a-."""
    _power_kernel(spec)
    if not rho > 0:
        raise DomainError("I2 needs rho > 0")
    w = spec.weight
    upper = w.mu * (rho + 1.0) / rho
    return power_integral(w.a_plus / w.a_minus, upper, w.a_minus, 1.0 / spec.p, spec.nonlinearity.kappa, q)


def dI1_drho(rho: float, spec: ProblemSpec) -> float:
    """Closed-form derivative of I1 (always negative)."""
    _power_kernel(spec)
    w = spec.weight
    p, k = spec.p, spec.nonlinearity.kappa
    return -(w.mu ** (1.0 - k - 1.0 / p)) / (
        abs(w.a_minus - w.a_plus * rho) ** (1.0 / p) * (rho + 1.0) ** k
    )


def dI2_drho(rho: float, spec: ProblemSpec) -> float:
    """Closed-form derivative of I2: rho^(-2 + kappa + 1/p) * I1'(rho)."""
    p, k = spec.p, spec.nonlinearity.kappa
    return rho ** (-2.0 + k + 1.0 / p) * dI1_drho(rho, spec)


def quotient_exponent(spec: ProblemSpec) -> float:
    """-1 + kappa + 1/p, the power of rho in F."""
    return -1.0 + spec.nonlinearity.kappa + 1.0 / spec.p


def F_quotient(rho: float, spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """F(rho) = rho^(-1+kappa+1/p) I1(rho) / I2(rho), for rho strictly inside its domain."""
    _power_kernel(spec)
    rho = float(rho)
    _check_rho(rho, spec)
    i1 = integral_I1(rho, spec, q)
    i2 = integral_I2(rho, spec, q)
    return rho ** quotient_exponent(spec) * i1 / i2


def F_curve(rhos, spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE,
            max_workers: int | None = None) -> np.ndarray:
    """F_quotient on many points, in input order.

    The compiled quadrature releases the GIL, so a thread pool gives real
    parallelism when more than one core is available.
    """
    rhos = [float(r) for r in rhos]
    if max_workers == 1 or len(rhos) < 8:
        return np.array([F_quotient(r, spec, q) for r in rhos])
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return np.array(list(pool.map(lambda r: F_quotient(r, spec, q), rhos)))


def K0(gamma: float, a_plus: float, a_minus: float, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Limit of F as rho -> 0+ for p = 2 and -1 < gamma < 1."""
    if not -1.0 < gamma < 1.0:
        raise DomainError(f"K0 is defined for gamma in ]-1, 1[, got {gamma!r}")
    if not (a_plus > 0 and a_minus > 0):
        raise DomainError("a_plus and a_minus must be positive")
    e = (1.0 - gamma) / (2.0 * (gamma + 1.0))
    kappa = gamma / (gamma + 1.0)
    mu = a_plus / (a_plus + a_minus)
    integral = -power_integral(1.0, mu, 1.0, 0.5, kappa, q)
    return e * ((a_plus + a_minus) / a_plus) ** e * math.sqrt(a_minus / a_plus) * integral


def F_limits(spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """Analytic limits of F at the ratio end and at the far end of the rho-domain.

    The far end is rho -> 0+ when gamma > -1 and rho -> +inf when gamma < -1.
    """
    _power_kernel(spec)
    w = spec.weight
    gamma, p = spec.gamma, spec.p
    at_ratio = w.ratio
    if gamma < -1.0:
        return at_ratio, math.inf
    if gamma >= p - 1.0:
        return at_ratio, 0.0
    if p == 2.0:
        if gamma == 0.0:
            return at_ratio, at_ratio
        return at_ratio, K0(gamma, w.a_plus, w.a_minus, q)
    raise UnsupportedError(
        f"the rho -> 0+ limit for p={p} and -1 < gamma < p-1 has no closed form here"
    )


# -- unfactored maps (any kernel) ------------------------------------------

def _integrand(spec: ProblemSpec, scale: float):
    """1 / (-L_h(scale * d) * L_g(theta)) as a vectorised f(theta, d)."""
    L_h, L_g = spec.kernel.L_h, spec.nonlinearity.L_g

    def f(theta, d):
        return 1.0 / (-L_h(scale * d) * L_g(theta))

    return f


def generic_M(omega: float, sigma: float, spec: ProblemSpec,
              q: QuadratureConfig = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """The two time maps in the (omega, sigma) variables.

    M_I  = int_{mu omega + (1-mu) sigma}^{omega} dtheta / (-L_h(a+ (omega - theta)) L_g(theta))
    M_II = int_{sigma}^{mu omega + (1-mu) sigma} dtheta / (-L_h(a- (theta - sigma)) L_g(theta))

    defined for omega > sigma, both in the range of G.
    """
    omega, sigma = float(omega), float(sigma)
    sg = spec.nonlinearity.sign
    if not (sg * omega > 0 and sg * sigma > 0):
        raise DomainError("omega and sigma must both lie in the range of G")
    if not omega > sigma:
        raise DomainError(f"need omega > sigma (got {omega!r}, {sigma!r})")
    w = spec.weight
    order = spec.kernel.singular_order
    mid = w.mu * omega + (1.0 - w.mu) * sigma
    m1 = -singular_integral(_integrand(spec, w.a_plus), omega, mid, order, q)
    m2 = singular_integral(_integrand(spec, w.a_minus), sigma, mid, order, q)
    return m1, m2


def reduced_maps(omega: float, rho: float, spec: ProblemSpec,
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> tuple[float, float]:
    """The two time maps in the (omega, rho) variables, evaluated without factoring.

    F_I  = omega int_{mu(rho+1)}^{1} dxi / (-L_h(a+ omega (1 - xi)) L_g(omega xi))
    F_II = omega int_{(a+/a-) rho}^{mu(rho+1)} dxi / (-L_h(omega (a- xi - a+ rho)) L_g(omega xi))
    """
    omega, rho = float(omega), float(rho)
    if not spec.nonlinearity.sign * omega > 0:
        raise DomainError("omega must lie in the range of G")
    _check_rho(rho, spec)
    w = spec.weight
    L_h, L_g = spec.kernel.L_h, spec.nonlinearity.L_g
    aw = abs(omega)
    order = spec.kernel.singular_order

    def f1(xi, d):
        return 1.0 / (-L_h(w.a_plus * aw * d) * L_g(omega * xi))

    def f2(xi, d):
        return 1.0 / (-L_h(w.a_minus * aw * d) * L_g(omega * xi))

    mid = w.mu * (rho + 1.0)
    r1 = -omega * singular_integral(f1, 1.0, mid, order, q)
    r2 = omega * singular_integral(f2, w.a_plus / w.a_minus * rho, mid, order, q)
    return r1, r2


def is_power_kernel(spec: ProblemSpec) -> bool:
    return spec.kernel.kind is not KernelKind.MINKOWSKI
