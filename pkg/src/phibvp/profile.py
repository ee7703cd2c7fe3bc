"""Rebuild u(t) from a reduced solution by inverting the time maps.

On the positive-weight part the orbit follows H(y) + a+ G(x) = a+ G(alpha);
on the negative-weight part H(y) - a- G(x) = -a- G(beta).  With
zeta = G(x)/omega the time spent between two points of either branch is a
one-dimensional singular integral, so every grid node is located by
quadrature plus a bracketed root solve.  No ODE stepping is involved; the
RK oracle stays an independent check.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Any, TextIO

import numpy as np
from scipy.optimize import brentq

from .errors import ConsistencyError, ContractError, UnsupportedError
from .problem import BoundaryCondition, ProblemSpec
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, power_integral, singular_integral
from .solver import ReducedSolution

DEFAULT_POINTS = 1001


@dataclass(frozen=True)
class SolutionProfile:
    """Sampled trajectory; ``half_window`` marks the Neumann piece of a periodic problem."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    bc: BoundaryCondition
    diagnostics: dict[str, Any] = field(default_factory=dict)
    half_window: bool = False

    def summary(self) -> dict[str, Any]:
        i_max, i_min = int(np.argmax(self.x)), int(np.argmin(self.x))
        return {
            "bc": self.bc.value,
            "n_points": int(self.t.size),
            "t_range": [float(self.t[0]), float(self.t[-1])],
            "x_max": float(self.x[i_max]),
            "t_at_x_max": float(self.t[i_max]),
            "x_min": float(self.x[i_min]),
            "t_at_x_min": float(self.t[i_min]),
            "diagnostics": {k: v for k, v in self.diagnostics.items()},
        }

    def write_csv(self, out: TextIO) -> None:
        """Columns t,x,y with 17 significant digits."""
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["t", "x", "y"])
        for row in zip(self.t, self.x, self.y):
            w.writerow(["%.17g" % v for v in row])

    def to_json(self) -> str:
        payload = {
            "bc": self.bc.value,
            "half_window": self.half_window,
            "t": [float(v) for v in self.t],
            "x": [float(v) for v in self.x],
            "y": [float(v) for v in self.y],
            "diagnostics": self.diagnostics,
        }
        return json.dumps(payload, sort_keys=True)


def _grid(t1: float, t2: float, n_points: int) -> tuple[np.ndarray, int]:
    """Uniform on [0, t1] and on [t1, t1 + t2], node t1 included; returns (grid, index of t1)."""
    if n_points < 3:
        raise ContractError("need at least 3 points")
    n1 = min(max(1, round((n_points - 1) * t1 / (t1 + t2))), n_points - 2)
    n2 = n_points - 1 - n1
    left = np.linspace(0.0, t1, n1 + 1)
    right = np.linspace(t1, t1 + t2, n2 + 1)
    return np.concatenate([left, right[1:]]), n1


def _invert(time_of, d_end: float, targets: np.ndarray) -> np.ndarray:
    """Solve time_of(d) = target for each target, with time_of increasing on [0, d_end]."""
    d_vals = np.empty(targets.shape)
    t_end = time_of(d_end)
    for i, tt in enumerate(targets):
        if tt <= 0.0:
            d_vals[i] = 0.0
            continue
        hi = d_end
        if tt >= t_end:
            raise ConsistencyError(f"time-map inversion: node at time {tt} lies beyond the branch end {t_end}")
        d_vals[i] = brentq(lambda d: time_of(d) - tt, 0.0, hi, xtol=1e-15 * max(d_end, 1e-300),
                           rtol=4 * np.finfo(float).eps, maxiter=200)
    return d_vals


def reconstruct_neumann(red: ReducedSolution, spec: ProblemSpec, n_points: int = DEFAULT_POINTS,
                        q: QuadratureConfig = DEFAULT_QUADRATURE) -> SolutionProfile:
    """Profile of the Neumann solution described by ``red``.

    For a periodic reduced solution this is the half-window piece, returned
    in absolute time on [tau/2, (T + tau)/2] and marked ``half_window``.
    """
    if not spec.kernel.is_power:
        raise UnsupportedError("reconstruction needs a homogeneous kernel")
    if red.bc is not spec.bc:
        raise ContractError("reduced solution and spec disagree on the boundary condition")
    w, nl, ker = spec.weight, spec.nonlinearity, spec.kernel
    inv_p, kappa, sg = 1.0 / spec.p, nl.kappa, nl.sign
    omega, rho = red.omega, red.rho
    t1, t2 = red.targets
    # both branches share the factor t1 / I1(rho) = k omega |omega|^(-kappa - 1/p)
    C = abs(spec.kernel.c_p ** -1 * abs(spec.gamma + 1.0) ** -kappa * abs(omega) ** (1.0 - kappa - inv_p))
    grid, i_sw = _grid(t1, t2, n_points)

    # branch 1: zeta = 1 - sg * d, time from t = 0
    d1_end = abs(1.0 - w.mu * (rho + 1.0))

    def time1(d):
        return C * abs(power_integral(1.0, 1.0 - sg * d, w.a_plus, inv_p, kappa, q))

    # branch 2: zeta = s + sg * d, time measured back from the far end
    s = w.a_plus / w.a_minus * rho
    d2_end = abs(w.mu * (rho + 1.0) - s)

    def time2(d):
        return C * abs(power_integral(s, s + sg * d, w.a_minus, inv_p, kappa, q))

    d1 = _invert(time1, d1_end, grid[: i_sw])
    d2 = _invert(time2, d2_end, (t1 + t2) - grid[i_sw + 1:])
    x = np.empty(grid.shape)
    y = np.empty(grid.shape)
    x[: i_sw] = nl.G_inv(omega * (1.0 - sg * d1))
    y[: i_sw] = ker.H_l_inv(w.a_plus * abs(omega) * d1)
    x[i_sw + 1:] = nl.G_inv(omega * (s + sg * d2))
    y[i_sw + 1:] = ker.H_l_inv(w.a_minus * abs(omega) * d2)
    # endpoint identities of the construction
    x[0], y[0] = red.alpha, 0.0
    x[i_sw], y[i_sw] = red.x_star, red.y_star
    x[-1], y[-1] = red.beta, 0.0

    half = spec.bc is BoundaryCondition.PERIODIC
    offset = 0.5 * w.tau if half else 0.0
    t = grid + offset
    diag = {
        "bc_residuals": [float(y[0]), float(y[-1])],
        "level_set_drift": _drift(t, x, y, spec, red),
        "branch_end_times": [time1(d1_end), time2(d2_end)],
        "switch_time": float(t[i_sw]),
    }
    return SolutionProfile(t, x, y, BoundaryCondition.NEUMANN, diag, half_window=half)


def _drift_nodes(t, x, y, spec: ProblemSpec, red: ReducedSolution) -> np.ndarray:
    w, nl, ker = spec.weight, spec.nonlinearity, spec.kernel
    Hy = ker.H(y)
    Gx = nl.G(x)
    e1 = np.abs(Hy + w.a_plus * Gx - w.a_plus * red.omega)
    e2 = np.abs(Hy - w.a_minus * Gx + w.a_minus * red.sigma)
    tt = np.mod(t, w.T)
    on_switch = np.isclose(tt, 0.0, atol=1e-12) | np.isclose(tt, w.T, atol=1e-12) | np.isclose(tt, w.tau, atol=1e-12)
    # switch nodes lie on both level sets
    return np.where(on_switch, np.minimum(e1, e2), np.where(tt < w.tau, e1, e2))


def _drift(t, x, y, spec: ProblemSpec, red: ReducedSolution) -> float:
    """Largest violation of the two level-set identities."""
    return float(np.max(_drift_nodes(t, x, y, spec, red)))


def extend_periodic(profile: SolutionProfile, spec: ProblemSpec) -> SolutionProfile:
    """T-periodic solution on [0, T] from the half-window Neumann piece.

    The reflection (x, y)(t) -> (x(tau - t), -y(tau - t)) fills
    [(tau - T)/2, tau/2]; its part below 0 is shifted by T.
    """
    if not profile.half_window:
        raise ContractError("extend_periodic needs the half-window profile of a periodic problem")
    w = spec.weight
    tw, xw, yw = profile.t, profile.x, profile.y
    tr = w.tau - tw[::-1]
    xr, yr = xw[::-1], -yw[::-1]
    # drop the two fixed points tau/2 and (T + tau)/2, already in the half window
    tr, xr, yr = tr[1:-1], xr[1:-1], yr[1:-1]
    neg = tr < 0.0
    tr = np.where(neg, tr + w.T, tr)
    t = np.concatenate([tr, tw])
    x = np.concatenate([xr, xw])
    y = np.concatenate([yr, yw])
    order = np.argsort(t, kind="stable")
    t, x, y = t[order], x[order], y[order]
    # t = 0 comes from the switch node tau; repeat it at t = T
    if t[0] != 0.0:
        raise ConsistencyError("reflected grid does not reach t = 0")
    t = np.append(t, w.T)
    x = np.append(x, x[0])
    y = np.append(y, y[0])
    diag = dict(profile.diagnostics)
    diag["bc_residuals"] = [float(x[-1] - x[0]), float(y[-1] - y[0])]
    return SolutionProfile(t, x, y, BoundaryCondition.PERIODIC, diag, half_window=False)


def reconstruct(red: ReducedSolution, spec: ProblemSpec, n_points: int = DEFAULT_POINTS,
                q: QuadratureConfig = DEFAULT_QUADRATURE) -> SolutionProfile:
    """Neumann profile on [0, T], or the full periodic profile on [0, T]."""
    prof = reconstruct_neumann(red, spec, n_points, q)
    if spec.bc is BoundaryCondition.PERIODIC:
        return extend_periodic(prof, spec)
    return prof


def transit_time(x: float, red: ReducedSolution, spec: ProblemSpec, branch: str = "lower",
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Time between the point of abscissa x on the a+ level line and (alpha, 0).

    ``branch`` picks y < 0 (after the maximum) or y > 0 (before it).  The
    two agree, which is why the periodic solution is symmetric about its
    maximum.  Computed as int_x^alpha dxi / |h(y(xi))| with y taken from
    H_l^{-1} or H_r^{-1}.
    """
    w, nl, ker = spec.weight, spec.nonlinearity, spec.kernel
    inv = ker.H_l_inv if branch == "lower" else ker.H_r_inv
    alpha = red.alpha
    if not 0 < x < alpha:
        raise ContractError("x must lie in ]0, alpha[")

    gp1 = spec.gamma + 1.0
    top = w.a_plus * float(nl.G(alpha))

    def f(xi, d):
        # a+ (G(alpha) - G(xi)) with 1 - (xi/alpha)^(g+1) formed from d = alpha - xi
        level = -top * np.expm1(gp1 * np.log1p(-d / alpha))
        return 1.0 / np.abs(ker.h(inv(np.abs(level))))

    return abs(singular_integral(f, alpha, x, ker.singular_order, q))


def level_drift_series(profile: SolutionProfile, red: ReducedSolution, spec: ProblemSpec) -> np.ndarray:
    """Per-node violation of the level-set identity of the phase each node lies in."""
    return _drift_nodes(profile.t, profile.x, profile.y, spec, red)
