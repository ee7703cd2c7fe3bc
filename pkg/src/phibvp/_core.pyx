# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.

power_integral
    Oriented integral from a singular point s to L of
    1 / ((A |xi - s|)**inv_p * xi**kappa), by tanh-sinh quadrature.
rk4_path
    Fixed-step RK4 for x' = h(y), y' = -c(t) x**gamma with piecewise
    constant c, landing exactly on every output time.

_fallback.py implements the same two functions in Python/numpy and must
stay numerically interchangeable with this file.
"""

from libc.math cimport sinh, cosh, exp, log, pow, fabs, asinh, sqrt, isfinite, ceil, M_PI

cdef double HALF_PI = 0.5 * M_PI
cdef double H0 = 0.5
cdef double X_CEIL = 1e150
cdef double SPEED_LIMIT = 1.0 - 1e-12


cdef inline double _tmax(double order) nogil:
    cdef double u = 21.0 / (1.0 - order)
    if u > 340.0:
        u = 340.0
    return asinh(u / HALF_PI)


cdef double _de_sum(int mode, double a, double b, double s0, double A, double inv_p,
                    double kappa, double h, double tmax, bint odd_only) nogil:
    # mode 0: a is the singular point, integrand (A d)^-inv_p xi^-kappa
    # mode 1: log variable w in [a, b], integrand e^w (A (e^w - s0))^-inv_p e^(-kappa w)
    cdef double D = fabs(b - a)
    cdef double dirn = 1.0 if b > a else -1.0
    cdef long N = <long>(tmax / h)
    cdef long j
    cdef double total = 0.0, t, u, E, ds, dl, w, xi, f, ex
    for j in range(-N, N + 1):
        if odd_only and j % 2 == 0:
            continue
        t = j * h
        u = HALF_PI * sinh(t)
        E = exp(-2.0 * fabs(u))
        if t <= 0.0:
            ds = D * E / (1.0 + E)
            dl = D / (1.0 + E)
        else:
            ds = D / (1.0 + E)
            dl = D * E / (1.0 + E)
        if ds == 0.0 or dl == 0.0:
            continue
        w = 0.5 * D * HALF_PI * cosh(t) * 4.0 * E / ((1.0 + E) * (1.0 + E))
        if ds <= dl:
            xi = a + dirn * ds
        else:
            xi = b - dirn * dl
        if mode == 0:
            f = pow(A * ds, -inv_p) * pow(xi, -kappa)
        else:
            ex = exp(xi)
            f = ex * pow(A * (ex - s0), -inv_p) * exp(-kappa * xi)
        total += w * f
    return total * h * dirn


cdef int _de(int mode, double a, double b, double s0, double A, double inv_p, double kappa,
             double order, double abs_tol, double rel_tol, int max_levels,
             double* out, double* prev) nogil:
    cdef double tmax = _tmax(order)
    cdef double h = H0
    cdef double S = _de_sum(mode, a, b, s0, A, inv_p, kappa, h, tmax, False)
    cdef double Snew, tol
    cdef int k
    prev[0] = S
    for k in range(1, max_levels):
        h *= 0.5
        Snew = 0.5 * S + _de_sum(mode, a, b, s0, A, inv_p, kappa, h, tmax, True)
        tol = rel_tol * fabs(Snew)
        if abs_tol > tol:
            tol = abs_tol
        prev[0] = S
        S = Snew
        if k >= 2 and fabs(S - prev[0]) <= tol:
            out[0] = S
            return 1
    out[0] = S
    return 0


def power_integral(double s, double L, double A, double inv_p, double kappa,
                   double abs_tol, double rel_tol, int max_levels):
    """Return ``(value, previous_estimate, converged)``."""
    cdef double v1 = 0.0, p1 = 0.0, v2 = 0.0, p2 = 0.0
    cdef int ok1, ok2 = 1
    if L == s:
        return 0.0, 0.0, True
    with nogil:
        if s > 0.0 and L > 4.0 * s:
            ok1 = _de(0, s, 2.0 * s, s, A, inv_p, kappa, inv_p,
                      0.5 * abs_tol, rel_tol, max_levels, &v1, &p1)
            ok2 = _de(1, log(2.0 * s), log(L), s, A, inv_p, kappa, 0.0,
                      0.5 * abs_tol, rel_tol, max_levels, &v2, &p2)
        else:
            ok1 = _de(0, s, L, s, A, inv_p, kappa, inv_p,
                      abs_tol, rel_tol, max_levels, &v1, &p1)
    return v1 + v2, p1 + p2, bool(ok1 and ok2)


cdef inline double _h(double y, int kind, double hexp) nogil:
    if kind == 0:
        return y
    if kind == 1:
        if y >= 0.0:
            return pow(y, hexp)
        return -pow(-y, hexp)
    return y / sqrt(1.0 + y * y)


cdef inline bint _bad(double x, double y, int kind, double hexp) nogil:
    if not (x > 0.0) or not isfinite(y) or x > X_CEIL:
        return True
    if kind == 2 and fabs(_h(y, kind, hexp)) >= SPEED_LIMIT:
        return True
    return False


def rk4_path(double x0, double y0, double[::1] times, double[::1] coefs, double max_step,
             double gamma, int kind, double hexp, double x_floor,
             double[::1] out_x, double[::1] out_y):
    """Integrate from (x0, y0) at times[0]; coefs[i] is a(t) on [times[i], times[i+1]].

    Returns ``(n_recorded, status, t_last, x_last, y_last)`` with status
    0 = completed, 1 = collapse (x -> 0+), 2 = escape (blow-up / speed limit).
    The ``*_last`` values are the last state that passed the guards.
    """
    cdef Py_ssize_t n = times.shape[0]
    cdef Py_ssize_t i
    cdef long k, nsub
    cdef double x = x0, y = y0, t = times[0], dt, c
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, xs, ys
    cdef int status = 0
    out_x[0] = x
    out_y[0] = y
    with nogil:
        for i in range(n - 1):
            nsub = <long>ceil((times[i + 1] - times[i]) / max_step)
            if nsub < 1:
                nsub = 1
            dt = (times[i + 1] - times[i]) / nsub
            c = coefs[i]
            for k in range(nsub):
                k1x = _h(y, kind, hexp)
                k1y = -c * pow(x, gamma)
                xs = x + 0.5 * dt * k1x
                ys = y + 0.5 * dt * k1y
                if _bad(xs, ys, kind, hexp):
                    status = 1 if xs <= 0.0 else 2
                    break
                k2x = _h(ys, kind, hexp)
                k2y = -c * pow(xs, gamma)
                xs = x + 0.5 * dt * k2x
                ys = y + 0.5 * dt * k2y
                if _bad(xs, ys, kind, hexp):
                    status = 1 if xs <= 0.0 else 2
                    break
                k3x = _h(ys, kind, hexp)
                k3y = -c * pow(xs, gamma)
                xs = x + dt * k3x
                ys = y + dt * k3y
                if _bad(xs, ys, kind, hexp):
                    status = 1 if xs <= 0.0 else 2
                    break
                k4x = _h(ys, kind, hexp)
                k4y = -c * pow(xs, gamma)
                xs = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
                ys = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
                if _bad(xs, ys, kind, hexp) or xs < x_floor:
                    status = 1 if xs < x_floor else 2
                    break
                x = xs
                y = ys
                t = times[i] + (k + 1) * dt
            if status != 0:
                break
            t = times[i + 1]
            out_x[i + 1] = x
            out_y[i + 1] = y
    if status != 0:
        return i + 1, status, t, x, y
    return n, 0, t, x, y
