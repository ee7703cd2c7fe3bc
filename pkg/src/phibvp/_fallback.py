"""Pure-Python twins of the kernels in ``_core.pyx``.

Selected automatically when the extension is not built, or forced with
``PHIBVP_PURE_PYTHON=1``.  Keep the arithmetic in step with the Cython file.
"""

from __future__ import annotations

import math

import numpy as np

HALF_PI = 0.5 * math.pi
H0 = 0.5
X_CEIL = 1e150
SPEED_LIMIT = 1.0 - 1e-12


def _tmax(order):
    return math.asinh(min(21.0 / (1.0 - order), 340.0) / HALF_PI)


def de_nodes(a, b, h, tmax, odd_only):
    """Tanh-sinh nodes on the oriented interval [a, b].

    Returns ``(xi, d_a, weight, direction)`` where ``d_a = |xi - a|`` is
    computed without cancellation and the weights already include ``h``.
    """
    D = abs(b - a)
    dirn = 1.0 if b > a else -1.0
    N = int(tmax / h)
    j = np.arange(-N, N + 1)
    if odd_only:
        j = j[j % 2 != 0]
    t = j * h
    u = HALF_PI * np.sinh(t)
    E = np.exp(-2.0 * np.abs(u))
    ds = np.where(t <= 0.0, D * E / (1.0 + E), D / (1.0 + E))
    dl = np.where(t <= 0.0, D / (1.0 + E), D * E / (1.0 + E))
    keep = (ds > 0.0) & (dl > 0.0)
    ds, dl, t, E = ds[keep], dl[keep], t[keep], E[keep]
    w = 0.5 * D * HALF_PI * np.cosh(t) * 4.0 * E / ((1.0 + E) * (1.0 + E))
    xi = np.where(ds <= dl, a + dirn * ds, b - dirn * dl)
    return xi, ds, w * h, dirn


def de_integrate(f, a, b, order, abs_tol, rel_tol, max_levels):
    """Oriented tanh-sinh integral of ``f(xi, d_a)`` over [a, b].

    ``order`` is the algebraic singularity order at ``a`` (0 if regular);
    it sets how far the transformed abscissae are followed.
    Returns ``(value, previous_estimate, converged)``.
    """
    tmax = _tmax(order)
    h = H0
    xi, d, w, dirn = de_nodes(a, b, h, tmax, False)
    S = dirn * float(np.sum(w * f(xi, d)))
    prev = S
    for k in range(1, max_levels):
        h *= 0.5
        xi, d, w, dirn = de_nodes(a, b, h, tmax, True)
        Snew = 0.5 * S + dirn * float(np.sum(w * f(xi, d)))
        prev, S = S, Snew
        if k >= 2 and abs(S - prev) <= max(abs_tol, rel_tol * abs(S)):
            return S, prev, True
    return S, prev, False


def power_integral(s, L, A, inv_p, kappa, abs_tol, rel_tol, max_levels):
    """Return ``(value, previous_estimate, converged)``; see ``_core.power_integral``."""
    if L == s:
        return 0.0, 0.0, True

    def near(xi, d):
        return np.power(A * d, -inv_p) * np.power(xi, -kappa)

    if s > 0.0 and L > 4.0 * s:

        def far(w, _):
            ex = np.exp(w)
            return ex * np.power(A * (ex - s), -inv_p) * np.exp(-kappa * w)

        v1, p1, ok1 = de_integrate(near, s, 2.0 * s, inv_p, 0.5 * abs_tol, rel_tol, max_levels)
        v2, p2, ok2 = de_integrate(far, math.log(2.0 * s), math.log(L), 0.0, 0.5 * abs_tol, rel_tol, max_levels)
        return v1 + v2, p1 + p2, ok1 and ok2
    return de_integrate(near, s, L, inv_p, abs_tol, rel_tol, max_levels)


def _h(y, kind, hexp):
    if kind == 0:
        return y
    if kind == 1:
        return y ** hexp if y >= 0.0 else -((-y) ** hexp)
    return y / math.sqrt(1.0 + y * y)


def _bad(x, y, kind, hexp):
    if not (x > 0.0) or not math.isfinite(y) or x > X_CEIL:
        return True
    return kind == 2 and abs(_h(y, kind, hexp)) >= SPEED_LIMIT


def rk4_path(x0, y0, times, coefs, max_step, gamma, kind, hexp, x_floor, out_x, out_y):
    """Return ``(n_recorded, status, t_last, x_last, y_last)``; see ``_core.rk4_path``."""
    n = len(times)
    x, y, t = float(x0), float(y0), float(times[0])
    out_x[0] = x
    out_y[0] = y
    status = 0
    i = 0
    for i in range(n - 1):
        nsub = max(1, math.ceil((times[i + 1] - times[i]) / max_step))
        dt = (times[i + 1] - times[i]) / nsub
        c = coefs[i]
        for k in range(nsub):
            k1x = _h(y, kind, hexp)
            k1y = -c * x**gamma
            xs, ys = x + 0.5 * dt * k1x, y + 0.5 * dt * k1y
            if _bad(xs, ys, kind, hexp):
                status = 1 if xs <= 0.0 else 2
                break
            k2x = _h(ys, kind, hexp)
            k2y = -c * xs**gamma
            xs, ys = x + 0.5 * dt * k2x, y + 0.5 * dt * k2y
            if _bad(xs, ys, kind, hexp):
                status = 1 if xs <= 0.0 else 2
                break
            k3x = _h(ys, kind, hexp)
            k3y = -c * xs**gamma
            xs, ys = x + dt * k3x, y + dt * k3y
            if _bad(xs, ys, kind, hexp):
                status = 1 if xs <= 0.0 else 2
                break
            k4x = _h(ys, kind, hexp)
            k4y = -c * xs**gamma
            xs = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            ys = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            if _bad(xs, ys, kind, hexp) or xs < x_floor:
                status = 1 if xs < x_floor else 2
                break
            x, y = xs, ys
            t = times[i] + (k + 1) * dt
        if status:
            return i + 1, status, t, x, y
        t = float(times[i + 1])
        out_x[i + 1] = x
        out_y[i + 1] = y
    return n, 0, t, x, y
