"""Problem data: the stepwise weight and the full boundary value problem."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .operators import KernelKind, OperatorKernel, PowerNonlinearity, make_operator


class BoundaryCondition(str, enum.Enum):
    NEUMANN = "neumann"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class WeightSpec:
    """a(t) = a_plus on [0, tau[ and -a_minus on [tau, T[."""

    a_plus: float
    a_minus: float
    tau: float
    T: float

    def __post_init__(self):
        vals = (self.a_plus, self.a_minus, self.tau, self.T)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError("weight parameters must be finite")
        if self.a_plus <= 0 or self.a_minus <= 0:
            raise DomainError("a_plus and a_minus must be positive")
        if not 0 < self.tau < self.T:
            raise DomainError("need 0 < tau < T")

    @property
    def a_bar(self) -> float:
        """Integral of a over one period."""
        return self.a_plus * self.tau - self.a_minus * (self.T - self.tau)

    @property
    def mu(self) -> float:
        return self.a_plus / (self.a_plus + self.a_minus)

    @property
    def ratio(self) -> float:
        """a_minus / a_plus, the common endpoint of every rho-domain."""
        return self.a_minus / self.a_plus

    @property
    def time_ratio(self) -> float:
        return self.tau / (self.T - self.tau)

    def a(self, t):
        """Weight at t, extended T-periodically."""
        tt = np.mod(np.asarray(t, dtype=float), self.T)
        return np.where(tt < self.tau, self.a_plus, -self.a_minus)

    def scaled(self, lam: float) -> "WeightSpec":
        return WeightSpec(lam * self.a_plus, lam * self.a_minus, self.tau, self.T)


@dataclass(frozen=True)
class ProblemSpec:
    kernel: OperatorKernel
    nonlinearity: PowerNonlinearity
    weight: WeightSpec
    bc: BoundaryCondition = BoundaryCondition.NEUMANN

    def __post_init__(self):
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))
        if self.bc is BoundaryCondition.PERIODIC:
            # periodic-to-Neumann reduction needs h odd; true for all shipped kernels
            y = np.linspace(-3.0, 3.0, 7)
            assert np.allclose(self.kernel.h(-y), -self.kernel.h(y))

    @property
    def gamma(self) -> float:
        return self.nonlinearity.gamma

    @property
    def p(self) -> float:
        return self.kernel.p_eff

    @property
    def targets(self) -> tuple[float, float]:
        """Right-hand sides of the reduced system (halved for periodic problems)."""
        w = self.weight
        if self.bc is BoundaryCondition.PERIODIC:
            return 0.5 * w.tau, 0.5 * (w.T - w.tau)
        return w.tau, w.T - w.tau

    def with_weight(self, weight: WeightSpec) -> "ProblemSpec":
        return ProblemSpec(self.kernel, self.nonlinearity, weight, self.bc)


def make_problem(
    gamma: float,
    a_plus: float,
    a_minus: float,
    tau: float,
    T: float,
    p: float = 2.0,
    kernel: KernelKind | str | None = None,
    bc: BoundaryCondition | str = BoundaryCondition.NEUMANN,
) -> ProblemSpec:
    """Convenience constructor.

    ``kernel`` defaults to the linear operator when ``p == 2`` and to the
    p-Laplacian otherwise.
    """
    if kernel is None:
        kernel = KernelKind.LINEAR if p == 2.0 else KernelKind.PLAPLACIAN
    kernel = KernelKind(kernel)
    op = make_operator(kernel, p if kernel is KernelKind.PLAPLACIAN else None)
    return ProblemSpec(op, PowerNonlinearity(float(gamma)), WeightSpec(a_plus, a_minus, tau, T), bc)
