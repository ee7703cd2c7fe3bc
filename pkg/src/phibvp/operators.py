"""Closed-form operator kernels h = phi^{-1} and power nonlinearities g(u) = u**gamma.

Everything the time-map integrands need is assembled from two objects:

``OperatorKernel``
    h, its primitive H (with H(0) = 0), the branch inverses H_l^{-1} on
    ]-inf, 0] and H_r^{-1} on [0, inf[, and the composite
    L_h = h o H_l^{-1} (which is <= 0).

``PowerNonlinearity``
    g(x) = x**gamma, its primitive G(x) = x**(gamma+1)/(gamma+1), G^{-1}
    and L_g = g o G^{-1}.

All maps accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


class KernelKind(str, enum.Enum):
    LINEAR = "linear"
    PLAPLACIAN = "plaplacian"
    MINKOWSKI = "minkowski"


class CaseClass(str, enum.Enum):
    """Behaviour of the primitive G at 0 and +inf.

    CASE_I: G_0 finite, G_inf = +inf.  CASE_II: both finite.
    CASE_III: G_0 = -inf, G_inf = +inf.  CASE_IV: G_0 = -inf, G_inf finite.
    """

    CASE_I = "i"
    CASE_II = "ii"
    CASE_III = "iii"
    CASE_IV = "iv"


def _spow(x, e):
    """sign(x) * |x|**e without touching negative bases."""
    return np.copysign(np.power(np.abs(x), e), x)


def _nonneg(xi, name):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0) or np.any(np.isnan(xi)):
        raise DomainError(f"{name} is defined on [0, inf[ only")
    return xi


@dataclass(frozen=True)
class OperatorKernel:
    kind: KernelKind
    p: float | None = None

    # -- power-kernel constants -------------------------------------------
    @property
    def is_power(self) -> bool:
        return self.kind is not KernelKind.MINKOWSKI

    @property
    def p_eff(self) -> float:
        """Homogeneity exponent p (2 for the linear kernel)."""
        if self.kind is KernelKind.LINEAR:
            return 2.0
        if self.kind is KernelKind.PLAPLACIAN:
            return float(self.p)
        raise DomainError("the Minkowski kernel is not homogeneous")

    @property
    def singular_order(self) -> float:
        """Exponent s with -L_h(xi) ~ const * xi**s as xi -> 0+."""
        if self.kind is KernelKind.MINKOWSKI:
            return 0.5
        return 1.0 / self.p_eff

    @property
    def c_p(self) -> float:
        """(p/(p-1))**(1/p), so that L_h(xi) = -c_p * xi**(1/p)."""
        p = self.p_eff
        return (p / (p - 1.0)) ** (1.0 / p)

    # -- maps ---------------------------------------------------------------
    def phi(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind is KernelKind.LINEAR:
            return s * 1.0
        if self.kind is KernelKind.PLAPLACIAN:
            return _spow(s, self.p - 1.0)
        if np.any(np.abs(s) >= 1.0):
            raise DomainError("Minkowski phi is defined on ]-1, 1[")
        return s / np.sqrt(1.0 - s * s)

    def h(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind is KernelKind.LINEAR:
            return y * 1.0
        if self.kind is KernelKind.PLAPLACIAN:
            return _spow(y, 1.0 / (self.p - 1.0))
        return y / np.sqrt(1.0 + y * y)

    def H(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind is KernelKind.LINEAR:
            return 0.5 * y * y
        if self.kind is KernelKind.PLAPLACIAN:
            p = self.p
            return (p - 1.0) / p * np.power(np.abs(y), p / (p - 1.0))
        # sqrt(1+y^2) - 1 written without cancellation
        return y * y / (np.sqrt(1.0 + y * y) + 1.0)

    def H_r_inv(self, xi):
        xi = _nonneg(xi, "H_r^{-1}")
        if self.kind is KernelKind.LINEAR:
            return np.sqrt(2.0 * xi)
        if self.kind is KernelKind.PLAPLACIAN:
            p = self.p
            return (p / (p - 1.0)) ** ((p - 1.0) / p) * np.power(xi, (p - 1.0) / p)
        return np.sqrt(xi * xi + 2.0 * xi)

    def H_l_inv(self, xi):
        return -self.H_r_inv(xi)

    def L_h(self, xi):
        xi = _nonneg(xi, "L_h")
        if self.kind is KernelKind.MINKOWSKI:
            return -np.sqrt(xi * xi + 2.0 * xi) / (1.0 + xi)
        return -self.c_p * np.power(xi, 1.0 / self.p_eff)


def make_operator(kind: KernelKind | str, p: float | None = None) -> OperatorKernel:
    """Build an operator kernel; ``p`` is required (and must exceed 1) for the p-Laplacian."""
    kind = KernelKind(kind)
    if kind is KernelKind.PLAPLACIAN:
        if p is None or not math.isfinite(p) or p <= 1.0:
            raise DomainError(
                f"p-Laplacian needs p > 1 (got {p!r}); otherwise phi is not a homeomorphism onto R"
            )
        return OperatorKernel(kind, float(p))
    return OperatorKernel(kind, None)


def classify_nonlinearity(gamma: float) -> CaseClass:
    """Case class of g(u) = u**gamma from the analytic limits of its primitive."""
    if gamma == -1.0:
        raise DomainError("gamma = -1 has a logarithmic primitive and is not covered")
    if not math.isfinite(gamma):
        raise DomainError(f"gamma must be finite, got {gamma!r}")
    # gamma > -1: G(x) = x^(g+1)/(g+1) -> 0 at 0+, +inf at inf.
    # gamma < -1: G -> -inf at 0+, 0 at inf.
    return CaseClass.CASE_I if gamma > -1.0 else CaseClass.CASE_IV


@dataclass(frozen=True)
class PowerNonlinearity:
    gamma: float

    def __post_init__(self):
        classify_nonlinearity(self.gamma)

    @property
    def case_class(self) -> CaseClass:
        return classify_nonlinearity(self.gamma)

    @property
    def kappa(self) -> float:
        """gamma / (gamma + 1): the exponent of L_g."""
        return self.gamma / (self.gamma + 1.0)

    @property
    def sign(self) -> float:
        """sign(gamma + 1), which is also the sign of G on ]0, inf[."""
        return 1.0 if self.gamma > -1.0 else -1.0

    @property
    def G0(self) -> float:
        return 0.0 if self.gamma > -1.0 else -math.inf

    @property
    def G_inf(self) -> float:
        return math.inf if self.gamma > -1.0 else 0.0

    def _positive(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(~(x > 0)):
            raise DomainError("g, G are defined on ]0, inf[")
        return x

    def _in_range(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(~(self.sign * xi > 0)):
            raise DomainError(f"argument must lie in sign(gamma+1)*]0, inf[ (gamma={self.gamma})")
        return xi

    def g(self, x):
        return np.power(self._positive(x), self.gamma)

    def G(self, x):
        x = self._positive(x)
        gp1 = self.gamma + 1.0
        return np.power(x, gp1) / gp1

    def G_inv(self, xi):
        xi = self._in_range(xi)
        gp1 = self.gamma + 1.0
        return np.power(abs(gp1) * np.abs(xi), 1.0 / gp1)

    def L_g(self, xi):
        xi = self._in_range(xi)
        k = self.kappa
        return abs(self.gamma + 1.0) ** k * np.power(np.abs(xi), k)
