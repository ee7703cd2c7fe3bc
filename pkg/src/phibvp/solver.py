"""Existence classification and solution of the reduced (omega, rho) system.

The second reduced equation F(rho) = t1/t2 depends on rho only; once its
root is known the first equation is a pure power in |omega| and is inverted
in closed form.  Here (t1, t2) = (tau, T - tau) for Neumann problems and
half of that for periodic ones.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ConsistencyError,
    DegenerateFamilyError,
    DomainError,
    EigenvalueDegenerateError,
    MultipleSolutionsError,
    NoSolutionError,
    PhiBVPError,
    UnsupportedError,
)
from .operators import KernelKind
from .problem import BoundaryCondition, ProblemSpec
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig
from .timemap import F_limits, F_quotient, K0, RhoSide, integral_I1, reduced_maps, rho_domain

log = logging.getLogger(__name__)

RHO_XTOL = 1e-12
_BOUNDARY_EPS = 1e-12


class ExistenceStatus(str, enum.Enum):
    UNIQUE_EXISTS = "UniqueExists"
    NONE_EXISTS = "NoneExists"
    EIGENVALUE_DEGENERATE = "EigenvalueDegenerate"
    OUTSIDE_THEORY = "OutsideTheory"


@dataclass(frozen=True)
class ExistenceVerdict:
    """``exists`` is True/False when settled and None when no result applies."""

    status: ExistenceStatus
    exists: bool | None
    report: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"status": self.status.value, "exists": self.exists, "condition_report": dict(self.report)}


@dataclass(frozen=True)
class ReducedSolution:
    rho: float
    omega: float
    sigma: float
    alpha: float
    beta: float
    x_star: float
    y_star: float
    residuals: tuple[float, float]
    targets: tuple[float, float]
    bc: BoundaryCondition = BoundaryCondition.NEUMANN

    def to_dict(self) -> dict[str, Any]:
        return {
            "rho": self.rho,
            "omega": self.omega,
            "sigma": self.sigma,
            "alpha": self.alpha,
            "beta": self.beta,
            "x_star": self.x_star,
            "y_star": self.y_star,
            "residuals": list(self.residuals),
            "targets": list(self.targets),
            "bc": self.bc.value,
        }


@dataclass(frozen=True)
class CrossingCount:
    count: int
    crossings: list[float]
    skipped: int


@dataclass(frozen=True)
class BifurcationPoint:
    lam: float
    omega: float
    alpha: float
    omega_free: bool = False


# -- regimes ----------------------------------------------------------------

def lower_threshold(p: float) -> float:
    """(1 - 2p)/(p - 1): at or below it the quotient is provably monotone."""
    return (1.0 - 2.0 * p) / (p - 1.0)


def in_uniqueness_regime(gamma: float, p: float) -> bool:
    """gamma <= (1-2p)/(p-1) (boundary included) or gamma > p-1."""
    lo = lower_threshold(p)
    return gamma <= lo + _BOUNDARY_EPS * max(1.0, abs(lo)) or gamma > p - 1.0 + _BOUNDARY_EPS * p


def is_eigen_exponent(gamma: float, p: float) -> bool:
    return abs(gamma - (p - 1.0)) <= _BOUNDARY_EPS * p


def _base_report(spec: ProblemSpec) -> dict[str, Any]:
    w = spec.weight
    return {
        "gamma": spec.gamma,
        "p": spec.p if spec.kernel.is_power else None,
        "kernel": spec.kernel.kind.value,
        "a_bar": w.a_bar,
        "time_ratio": w.time_ratio,
        "weight_ratio": w.ratio,
    }


def _sign_rule_violated(spec: ProblemSpec) -> bool:
    """Necessary sign condition: a_bar < 0 for increasing g, a_bar > 0 for decreasing g."""
    return spec.gamma * spec.weight.a_bar >= 0.0


def classify_existence(spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE) -> ExistenceVerdict:
    """Decide what is known about positive solutions of ``spec``."""
    rep = _base_report(spec)
    gamma, w = spec.gamma, spec.weight
    if spec.kernel.kind is KernelKind.MINKOWSKI:
        rep.update(rule="none", note="no reduced-system analysis is available for this kernel")
        return ExistenceVerdict(ExistenceStatus.OUTSIDE_THEORY, None, rep)
    p = spec.p
    ga = gamma * w.a_bar
    if is_eigen_exponent(gamma, p):
        rep.update(rule="gamma == p-1", note="homogeneous problem: solvable only at the principal eigenvalue")
        return ExistenceVerdict(ExistenceStatus.EIGENVALUE_DEGENERATE, None, rep)
    if in_uniqueness_regime(gamma, p):
        holds = ga < 0.0
        rep.update(rule="gamma*a_bar<0", gamma_times_a_bar=ga, holds=holds, uniqueness="proved")
        status = ExistenceStatus.UNIQUE_EXISTS if holds else ExistenceStatus.NONE_EXISTS
        return ExistenceVerdict(status, holds, rep)
    if gamma == 0.0:
        # u'' = -a(t): solvable iff a_bar = 0, and then only up to an additive constant
        degenerate = w.time_ratio == w.ratio
        rep.update(rule="a_bar == 0", holds=degenerate, note="F is constant; solutions form a one-parameter family")
        if degenerate:
            return ExistenceVerdict(ExistenceStatus.OUTSIDE_THEORY, True, rep)
        return ExistenceVerdict(ExistenceStatus.NONE_EXISTS, False, rep)
    r_t, r_w = w.time_ratio, w.ratio
    if p == 2.0 and 0.0 < gamma < 1.0:
        k0 = K0(gamma, w.a_plus, w.a_minus, q)
        holds = k0 < r_t < r_w
        rep.update(rule="K0 < tau/(T-tau) < a-/a+", K0=k0, holds=holds, uniqueness="proved")
        status = ExistenceStatus.UNIQUE_EXISTS if holds else ExistenceStatus.NONE_EXISTS
        return ExistenceVerdict(status, holds, rep)
    if p == 2.0 and -1.0 < gamma < 0.0:
        k0 = K0(gamma, w.a_plus, w.a_minus, q)
        holds = r_w < r_t < k0
        rep.update(rule="a-/a+ < tau/(T-tau) < K0", K0=k0, holds=holds, uniqueness="open")
        if holds:
            return ExistenceVerdict(ExistenceStatus.OUTSIDE_THEORY, True, rep)
        if r_t <= r_w:
            rep["note"] = "sign condition a_bar > 0 fails"
            return ExistenceVerdict(ExistenceStatus.NONE_EXISTS, False, rep)
        rep["note"] = "sufficient condition fails; existence not settled"
        return ExistenceVerdict(ExistenceStatus.OUTSIDE_THEORY, None, rep)
    if p == 2.0 and -3.0 < gamma < -1.0:
        holds = w.a_bar > 0.0
        rep.update(rule="a_bar>0", holds=holds, uniqueness="open")
        if holds:
            return ExistenceVerdict(ExistenceStatus.OUTSIDE_THEORY, True, rep)
        return ExistenceVerdict(ExistenceStatus.NONE_EXISTS, False, rep)
    # p != 2 between the thresholds: only the necessary sign condition is available
    violated = _sign_rule_violated(spec)
    rep.update(rule="sign condition (necessary only)", gamma_times_a_bar=ga, holds=not violated,
               uniqueness="open")
    if violated:
        return ExistenceVerdict(ExistenceStatus.NONE_EXISTS, False, rep)
    return ExistenceVerdict(ExistenceStatus.OUTSIDE_THEORY, None, rep)


# -- second equation --------------------------------------------------------

def _grow_bracket(g, spec: ProblemSpec, want_ratio: float, want_far: float) -> tuple[float, float]:
    """Find rho_a near the ratio end with sign(g) = want_ratio and rho_b near the
    far end with sign(g) = want_far."""
    dom = rho_domain(spec)
    r = spec.weight.ratio
    below = dom.side is RhoSide.BELOW_RATIO
    rho_a = None
    for k in range(3, 12):
        cand = r * (1.0 - 10.0**-k) if below else r * (1.0 + 10.0**-k)
        if math.copysign(1.0, g(cand)) == want_ratio:
            rho_a = cand
            break
    rho_b = None
    start = r * (1.0 - 1e-3) if below else r * (1.0 + 1e-3)
    cand = start
    for _ in range(1100):
        cand = cand * 0.5 if below else cand * 2.0
        if cand == 0.0 or not math.isfinite(cand):
            break
        if math.copysign(1.0, g(cand)) == want_far:
            rho_b = cand
            break
    if rho_a is None or rho_b is None:
        raise NoSolutionError("could not bracket the root of F(rho) - target inside the rho-domain")
    return rho_a, rho_b


def solve_rho(spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Root of F(rho) = t1/t2 in a regime where F is monotone.

    The bracket is grown from both ends of the domain using the analytic
    limits of F, then refined with Brent's method.
    """
    if not spec.kernel.is_power:
        raise UnsupportedError("F is only defined for homogeneous kernels")
    t1, t2 = spec.targets
    target = t1 / t2
    lim_ratio, lim_far = F_limits(spec, q)
    lo, hi = sorted((lim_ratio, lim_far))
    if not lo < target < hi:
        raise NoSolutionError(
            f"target tau/(T-tau)={target!r} is not strictly between the limits of F: "
            f"{lim_ratio!r} at rho -> a-/a+ and {lim_far!r} at the far end"
        )

    def g(rho):
        return F_quotient(rho, spec, q) - target

    want_ratio = math.copysign(1.0, lim_ratio - target)
    rho_a, rho_b = _grow_bracket(g, spec, want_ratio, -want_ratio)
    return brentq(g, min(rho_a, rho_b), max(rho_a, rho_b), xtol=RHO_XTOL, rtol=4 * np.finfo(float).eps,
                  maxiter=500)


def _scan_grid(spec: ProblemSpec, n: int) -> np.ndarray:
    r = spec.weight.ratio
    if spec.gamma > -1.0:
        # logistic spacing: dense near both ends of ]0, r[
        u = np.linspace(-26.0, 24.0, n)
        return r / (1.0 + np.exp(-u))
    return r * (1.0 + np.logspace(-8.0, 6.0, n))


def count_solutions(spec: ProblemSpec, grid_size: int = 400,
                    q: QuadratureConfig = DEFAULT_QUADRATURE) -> CrossingCount:
    """Count the roots of F(rho) - t1/t2 by sign changes on a grid, each refined by Brent's method.

    Grid points where the quadrature fails are skipped and counted.
    """
    if not spec.kernel.is_power:
        raise UnsupportedError("F is only defined for homogeneous kernels")
    if spec.gamma == 0.0:
        raise DomainError("F is constant for gamma = 0; crossings are not isolated")
    t1, t2 = spec.targets
    target = t1 / t2
    rhos = _scan_grid(spec, grid_size)
    vals = np.full(rhos.shape, np.nan)
    skipped = 0
    for i, rho in enumerate(rhos):
        try:
            vals[i] = F_quotient(float(rho), spec, q) - target
        except PhiBVPError:
            skipped += 1
    if skipped:
        log.warning("count_solutions: %d grid points skipped after quadrature failures", skipped)
    ok = np.flatnonzero(np.isfinite(vals))
    crossings: list[float] = []
    for i, j in zip(ok[:-1], ok[1:]):
        a, b = vals[i], vals[j]
        if a == 0.0:
            crossings.append(float(rhos[i]))
        elif a * b < 0.0:
            root = brentq(lambda r: F_quotient(r, spec, q) - target, float(rhos[i]), float(rhos[j]),
                          xtol=RHO_XTOL, rtol=4 * np.finfo(float).eps)
            crossings.append(root)
    if len(ok) and vals[ok[-1]] == 0.0:
        crossings.append(float(rhos[ok[-1]]))
    return CrossingCount(len(crossings), crossings, skipped)


# -- full reduced solution --------------------------------------------------

def omega_from_rho(rho: float, spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE,
                   lam: float = 1.0) -> float:
    """Invert the first reduced equation for omega (closed form).

    ``lam`` scales the weight, as in (phi(u'))' + lam a(t) u^gamma = 0.
    """
    p, nl = spec.p, spec.nonlinearity
    e = 1.0 / (spec.gamma + 1.0) - 1.0 / p
    if e == 0.0 or is_eigen_exponent(spec.gamma, p):
        raise EigenvalueDegenerateError("gamma = p-1: the first equation does not determine omega")
    t1 = spec.targets[0]
    i1 = integral_I1(rho, spec, q)
    mag = (lam ** (1.0 / p) * t1 * spec.kernel.c_p * abs(spec.gamma + 1.0) ** nl.kappa / abs(i1)) ** (1.0 / e)
    return nl.sign * mag


def _recover(rho: float, omega: float, spec: ProblemSpec, q: QuadratureConfig) -> ReducedSolution:
    w, nl, ker = spec.weight, spec.nonlinearity, spec.kernel
    sigma = w.a_plus / w.a_minus * omega * rho
    alpha = float(nl.G_inv(omega))
    beta = float(nl.G_inv(sigma))
    x_star = float(nl.G_inv(w.mu * omega + (1.0 - w.mu) * sigma))
    # a+ (G(alpha) - G(x*)) = a+ omega (1 - mu (rho + 1)), written without cancellation
    drop = w.a_plus * omega * (w.a_minus - w.a_plus * rho) / (w.a_plus + w.a_minus)
    y_star = float(ker.H_l_inv(drop))
    f1, f2 = reduced_maps(omega, rho, spec, q)
    t1, t2 = spec.targets
    return ReducedSolution(rho, omega, sigma, alpha, beta, x_star, y_star, (f1 - t1, f2 - t2), (t1, t2), spec.bc)


def _check_solution(sol: ReducedSolution, spec: ProblemSpec) -> None:
    a_bar = spec.weight.a_bar
    if (spec.gamma > 0 and not a_bar < 0) or (spec.gamma < 0 and not a_bar > 0):
        raise ConsistencyError(f"solution found with gamma={spec.gamma} but a_bar={a_bar}")
    if not 0.0 < sol.beta < sol.x_star < sol.alpha:
        raise ConsistencyError(f"ordering 0 < beta < x* < alpha fails: {sol.beta}, {sol.x_star}, {sol.alpha}")


def solve_reduced(spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE,
                  grid_size: int = 400) -> ReducedSolution:
    """Solve the reduced system and recover (alpha, beta, x*, y*).

    In proved-uniqueness regimes the root of F is bracketed from its limits.
    Elsewhere the rho-domain is scanned; more than one crossing raises
    ``MultipleSolutionsError``.  Residuals are computed from the unfactored
    time maps, independently of the closed-form omega.
    """
    if not spec.kernel.is_power:
        raise UnsupportedError("solve_reduced needs a homogeneous kernel; use generic_M for residuals")
    if is_eigen_exponent(spec.gamma, spec.p):
        raise EigenvalueDegenerateError(
            "gamma = p-1: omega is either free or nonexistent; see principal_eigenvalue"
        )
    verdict = classify_existence(spec, q)
    if spec.gamma == 0.0:
        if verdict.exists:
            raise DegenerateFamilyError("gamma = 0 with a_bar = 0: F is constant and rho is not determined")
        raise NoSolutionError(f"gamma = 0 needs a_bar = 0 (a_bar = {spec.weight.a_bar})")
    if verdict.status is ExistenceStatus.NONE_EXISTS:
        raise NoSolutionError(f"no positive solution: {verdict.report}")
    if verdict.status is ExistenceStatus.UNIQUE_EXISTS:
        rho = solve_rho(spec, q)
    else:
        cc = count_solutions(spec, grid_size, q)
        if cc.count == 0:
            raise NoSolutionError("scan of the rho-domain found no root of F(rho) - tau/(T-tau)")
        if cc.count > 1:
            raise MultipleSolutionsError(f"{cc.count} roots of F(rho) - tau/(T-tau)", cc.crossings)
        rho = cc.crossings[0]
    omega = omega_from_rho(rho, spec, q)
    sol = _recover(rho, omega, spec, q)
    _check_solution(sol, spec)
    return sol


# -- eigenvalue problem -----------------------------------------------------

def _require_monotone(spec: ProblemSpec) -> None:
    if not spec.kernel.is_power:
        raise UnsupportedError("bifurcation analysis needs a homogeneous kernel")
    g, p = spec.gamma, spec.p
    if not (in_uniqueness_regime(g, p) or is_eigen_exponent(g, p)):
        raise DomainError(
            f"gamma={g} is outside ]-inf, (1-2p)/(p-1)] U [p-1, inf[ where the root of F is unique"
        )


def principal_eigenvalue(spec: ProblemSpec, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """lambda_1 for (phi(u'))' + lambda a(t) u^(p-1) = 0 with the spec's boundary condition."""
    if not is_eigen_exponent(spec.gamma, spec.p):
        raise DomainError("the principal eigenvalue is defined for gamma = p-1")
    _require_monotone(spec)
    rho = solve_rho(spec, q)
    k = abs(spec.gamma + 1.0) ** (-spec.nonlinearity.kappa) / spec.kernel.c_p
    return (k * abs(integral_I1(rho, spec, q)) / spec.targets[0]) ** spec.p


def bifurcation_curve(spec: ProblemSpec, lambda_grid, q: QuadratureConfig = DEFAULT_QUADRATURE
                      ) -> list[BifurcationPoint]:
    """Points (lambda, omega(lambda)) of positive solutions of the lambda-scaled problem.

    For gamma = p-1 the single point (lambda_1, free omega) is returned.
    """
    _require_monotone(spec)
    if is_eigen_exponent(spec.gamma, spec.p):
        return [BifurcationPoint(principal_eigenvalue(spec, q), math.nan, math.nan, True)]
    rho = solve_rho(spec, q)
    pts = []
    for lam in lambda_grid:
        lam = float(lam)
        if not lam > 0:
            raise DomainError("lambda must be positive")
        omega = omega_from_rho(rho, spec, q, lam)
        pts.append(BifurcationPoint(lam, omega, float(spec.nonlinearity.G_inv(omega))))
    return pts


def eigen_solvable(spec: ProblemSpec, lam: float, q: QuadratureConfig = DEFAULT_QUADRATURE,
                   rtol: float = 1e-9) -> bool:
    """For gamma = p-1: whether a positive solution exists at ``lam`` (only at lambda_1)."""
    return abs(lam / principal_eigenvalue(spec, q) - 1.0) <= rtol
