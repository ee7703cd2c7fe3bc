"""Independent check by direct integration of the planar system

    x' = h(y),   y' = -a(t) x**gamma

with fixed-step RK4 that lands exactly on every switch time of the weight.
Nothing here uses the time-map reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, NoBracketError
from .operators import KernelKind
from .problem import BoundaryCondition, ProblemSpec

X_FLOOR = 1e-9
DEFAULT_STEPS = 100_000

STATUS_OK, STATUS_COLLAPSE, STATUS_ESCAPE = 0, 1, 2


@dataclass(frozen=True)
class ShootResult:
    """Trajectory on the requested output times.

    ``residual_neumann`` is y at the far Neumann endpoint (T, or (T+tau)/2
    for periodic problems, which are shot from tau/2).  After a singularity
    it falls back to the last valid y (or +inf for a collapse under a
    strong singularity, gamma < -1), which keeps the sign usable for
    bracketing.
    """

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    terminal: tuple[float, float]
    hit_singularity: bool
    status: int
    t_stop: float
    residual_neumann: float
    residual_periodic: tuple[float, float]


def _kind_code(spec: ProblemSpec) -> tuple[int, float]:
    k = spec.kernel
    if k.kind is KernelKind.LINEAR:
        return 0, 1.0
    if k.kind is KernelKind.PLAPLACIAN:
        return 1, 1.0 / (k.p - 1.0)
    return 2, 1.0


def shoot_window(spec: ProblemSpec) -> tuple[float, float, float]:
    """(t_start, t_neumann_end, t_end) for the spec's boundary condition."""
    w = spec.weight
    if spec.bc is BoundaryCondition.PERIODIC:
        return 0.5 * w.tau, 0.5 * (w.T + w.tau), 0.5 * w.tau + w.T
    return 0.0, w.T, w.T


def _output_times(spec: ProblemSpec, t_eval) -> np.ndarray:
    """Merge the requested outputs with the switch times and the window ends."""
    w = spec.weight
    t0, tn, t1 = shoot_window(spec)
    pts = [t0, tn, t1]
    k = math.floor(t0 / w.T)
    while k * w.T <= t1:
        for s in (k * w.T, k * w.T + w.tau):
            if t0 < s < t1:
                pts.append(s)
        k += 1
    if t_eval is not None:
        te = np.asarray(t_eval, dtype=float)
        if np.any(te < t0 - 1e-12) or np.any(te > t1 + 1e-12):
            raise DomainError(f"t_eval must lie in [{t0}, {t1}]")
        pts.extend(np.clip(te, t0, t1).tolist())
    return np.unique(np.asarray(pts, dtype=float))


def shoot(alpha: float, spec: ProblemSpec, step: float | None = None, t_eval=None,
          lam: float = 1.0, x_floor: float = X_FLOOR) -> ShootResult:
    """Integrate from (alpha, 0).

    Neumann problems start at t = 0 and run to T.  Periodic problems start
    at tau/2, the maximum of the solution, and run for one period.
    ``lam`` multiplies the weight.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    w = spec.weight
    if step is None:
        step = w.T / DEFAULT_STEPS
    if not step > 0:
        raise DomainError("step must be positive")
    times = _output_times(spec, t_eval)
    mids = 0.5 * (times[:-1] + times[1:])
    coefs = np.ascontiguousarray(lam * w.a(mids), dtype=float)
    kind, hexp = _kind_code(spec)
    xs = np.full(times.shape, np.nan)
    ys = np.full(times.shape, np.nan)
    n, status, t_last, x_last, y_last = _backend.rk4_path(
        float(alpha), 0.0, times, coefs, float(step), float(spec.gamma), kind, hexp, float(x_floor), xs, ys
    )
    _, tn, _ = shoot_window(spec)
    i_n = int(np.searchsorted(times, tn))
    if i_n < n:
        res_n = float(ys[i_n])
    elif status == STATUS_COLLAPSE and spec.gamma < -1.0:
        # strong singular force: orbits that narrowly avoid the collapse are
        # thrown back up, so y at the endpoint tends to +inf from that side
        res_n = math.inf
    else:
        res_n = y_last
        if res_n == 0.0:
            # failed inside the first step: use the sign of y'(t0)
            res_n = -math.copysign(1e-300, coefs[0])
    if status == STATUS_OK:
        res_p = (float(xs[-1] - xs[0]), float(ys[-1] - ys[0]))
        terminal = (float(xs[-1]), float(ys[-1]))
    else:
        res_p = (math.nan, math.nan)
        terminal = (x_last, y_last)
    if t_eval is not None:
        keep = np.isin(times, np.clip(np.asarray(t_eval, dtype=float), times[0], times[-1]))
        t_out, x_out, y_out = times[keep], xs[keep], ys[keep]
    else:
        t_out, x_out, y_out = times, xs, ys
    return ShootResult(t_out, x_out, y_out, terminal, status != STATUS_OK, status, t_last, res_n, res_p)


def alpha_scan(spec: ProblemSpec, alphas, step: float | None = None, lam: float = 1.0) -> np.ndarray:
    """Neumann residual y(T; alpha) for each alpha (NaN never appears; see ShootResult)."""
    return np.array([shoot(float(a), spec, step, lam=lam).residual_neumann for a in alphas])


def find_brackets(spec: ProblemSpec, lo: float = 1e-4, hi: float = 1e4, n: int = 41,
                  step: float | None = None, lam: float = 1.0) -> list[tuple[float, float]]:
    """Adjacent pairs of a log-spaced alpha grid where the residual changes sign."""
    alphas = np.geomspace(lo, hi, n)
    res = alpha_scan(spec, alphas, step, lam)
    out = []
    for i in range(n - 1):
        if res[i] == 0.0:
            out.append((float(alphas[i]), float(alphas[i])))
        elif res[i] * res[i + 1] < 0.0:
            out.append((float(alphas[i]), float(alphas[i + 1])))
    return out


def shooting_solve(spec: ProblemSpec, bracket: tuple[float, float] | None = None, step: float | None = None,
                   rtol: float = 1e-13, lam: float = 1.0) -> float:
    """Bisection in log(alpha) on the Neumann residual until the bracket is ``rtol`` wide.

    Without an explicit bracket the first sign change of a scan over
    [1e-4, 1e4] is used.
    """
    if bracket is None:
        brs = find_brackets(spec, step=step, lam=lam)
        if not brs:
            raise NoBracketError("residual y(T; alpha) keeps one sign on [1e-4, 1e4]")
        bracket = brs[0]
    a, b = sorted(float(v) for v in bracket)
    if not a > 0:
        raise DomainError("alpha bracket must be positive")
    fa = shoot(a, spec, step, lam=lam).residual_neumann
    if a == b:
        if fa == 0.0:
            return a
        raise NoBracketError("degenerate bracket without a root")
    fb = shoot(b, spec, step, lam=lam).residual_neumann
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NoBracketError(f"no sign change on [{a}, {b}]: residuals {fa}, {fb}")
    la, lb = math.log(a), math.log(b)
    while lb - la > rtol:
        lm = 0.5 * (la + lb)
        fm = shoot(math.exp(lm), spec, step, lam=lam).residual_neumann
        if fm == 0.0:
            return math.exp(lm)
        if fm * fa < 0.0:
            lb = lm
        else:
            la, fa = lm, fm
    return math.exp(0.5 * (la + lb))


def finite_difference_residual(t, x, spec: ProblemSpec, guard_cells: int = 2) -> np.ndarray:
    """(phi(u'))' + a(t) g(u) by nested second-order differences of u alone.

    Nodes within ``guard_cells`` of a weight switch or of the ends are set to
    NaN, since u'' jumps across a switch.
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    up = np.gradient(x, t, edge_order=2)
    if spec.kernel.kind is KernelKind.MINKOWSKI:
        up = np.clip(up, -1.0 + 1e-15, 1.0 - 1e-15)
    flux = np.gradient(spec.kernel.phi(up), t, edge_order=2)
    # the weight on each node is taken from the side that node belongs to
    res = flux + spec.weight.a(t) * spec.nonlinearity.g(x)
    w = spec.weight
    mask = np.zeros(t.shape, dtype=bool)
    mask[:guard_cells] = True
    mask[len(t) - guard_cells:] = True
    k0, k1 = math.floor(t[0] / w.T), math.ceil(t[-1] / w.T)
    for k in range(k0, k1 + 1):
        for s in (k * w.T, k * w.T + w.tau):
            if t[0] < s < t[-1]:
                j = int(np.argmin(np.abs(t - s)))
                mask[max(0, j - guard_cells): j + guard_cells + 1] = True
    res[mask] = np.nan
    return res
