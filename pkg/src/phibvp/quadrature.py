"""Double-exponential (tanh-sinh) quadrature for endpoint-singular integrands."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._fallback import de_integrate
from .errors import DomainError, QuadratureError


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_levels: int = 10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_levels < 3:
            raise DomainError("max_levels must be at least 3")

    def tightened(self, factor: float) -> "QuadratureConfig":
        """Tolerances divided by ``factor``; two extra refinement levels allowed per decade."""
        extra = 0
        f = factor
        while f >= 10:
            extra += 1
            f /= 10
        return QuadratureConfig(self.abs_tol / factor, self.rel_tol / factor, self.max_levels + extra)


DEFAULT_QUADRATURE = QuadratureConfig()


def power_integral(s: float, L: float, A: float, inv_p: float, kappa: float,
                   q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Oriented integral from the singular point ``s`` to ``L`` of

        1 / ((A |xi - s|)**inv_p * xi**kappa),

    with ``s, L > 0`` and ``0 <= inv_p < 1``.  Negative when ``L < s``.
    """
    if not (s > 0 and L > 0):
        raise DomainError("power_integral needs positive limits")
    value, prev, ok = _backend.power_integral(
        float(s), float(L), float(A), float(inv_p), float(kappa), q.abs_tol, q.rel_tol, q.max_levels
    )
    if not ok:
        raise QuadratureError(f"power integral from {s!r} to {L!r} did not converge", value, prev)
    return value


def singular_integral(f, s: float, L: float, order: float,
                      q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Oriented integral of ``f(xi, d)`` from the singular point ``s`` to ``L``.

    ``f`` must be vectorised; ``d = |xi - s|`` is supplied accurately so the
    integrand never has to form ``xi - s`` itself.  ``order`` is the
    algebraic blow-up exponent at ``s``.
    """
    s, L = float(s), float(L)
    if L == s:
        return 0.0
    if s != 0.0 and L / s > 4.0:
        # long range on one side of 0: keep the singular piece short and
        # treat the tail in the variable w = log|xi|
        sg = math.copysign(1.0, s)
        a = abs(s)

        def tail(w, _):
            ex = np.exp(w)
            return sg * ex * f(sg * ex, ex - a)

        v1, p1, ok1 = de_integrate(f, s, 2.0 * s, order, 0.5 * q.abs_tol, q.rel_tol, q.max_levels)
        v2, p2, ok2 = de_integrate(tail, math.log(2.0 * a), math.log(abs(L)), 0.0,
                                   0.5 * q.abs_tol, q.rel_tol, q.max_levels)
        value, prev, ok = v1 + v2, p1 + p2, ok1 and ok2
    else:
        value, prev, ok = de_integrate(f, s, L, order, q.abs_tol, q.rel_tol, q.max_levels)
    if not ok:
        raise QuadratureError(f"integral from {s!r} to {L!r} did not converge", value, prev)
    return value
