"""Compare the compiled kernels with their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat N]

Times ``power_integral`` over a batch of (rho, gamma) cases and one RK4
sweep of 1e5 steps, checks that both backends return the same numbers, and
prints a small table.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from phibvp import _fallback

try:
    from phibvp import _core
except ImportError:  # extension not built
    _core = None


def _power_cases():
    # (s, L, A, inv_p, kappa) for I1 / I2 style integrals, p = 2
    out = []
    for gamma in (-0.4, 0.2, 0.8, 3.0, -3.0):
        kappa = gamma / (gamma + 1.0)
        for rho in np.linspace(0.05, 1.9, 20):
            mu = 1.0 / 3.0
            if gamma < -1:
                rho = 2.0 + 10 * rho
            out.append((1.0, mu * (rho + 1.0), 1.0, 0.5, kappa))
            out.append((rho / 2.0, mu * (rho + 1.0) / rho, 2.0, 0.5, kappa))
    return out


def _run_power(mod, cases):
    return [mod.power_integral(*c, 1e-10, 1e-9, 10)[0] for c in cases]


def _run_rk(mod, n_steps=100_000):
    times = np.array([0.0, 1.0, 3.0])
    coefs = np.array([1.0, -2.0])
    xs = np.full(3, np.nan)
    ys = np.full(3, np.nan)
    mod.rk4_path(0.7, 0.0, times, coefs, 3.0 / n_steps, 3.0, 0, 1.0, 1e-9, xs, ys)
    return xs, ys


def _best(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled core not available; build with `pip install -e . --no-build-isolation`")
        return 1
    cases = _power_cases()
    rows = []
    t_py, v_py = _best(lambda: _run_power(_fallback, cases), args.repeat)
    t_cy, v_cy = _best(lambda: _run_power(_core, cases), args.repeat)
    dev = max(abs(a - b) / max(abs(a), 1e-300) for a, b in zip(v_py, v_cy))
    rows.append((f"power_integral x{len(cases)}", t_py, t_cy, dev))
    t_py, (x_py, y_py) = _best(lambda: _run_rk(_fallback), args.repeat)
    t_cy, (x_cy, y_cy) = _best(lambda: _run_rk(_core), args.repeat)
    dev = float(max(np.max(np.abs(x_py - x_cy)), np.max(np.abs(y_py - y_cy))))
    rows.append(("rk4_path 1e5 steps", t_py, t_cy, dev))

    print(f"{'kernel':<26}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}{'max dev':>12}")
    for name, tp, tc, d in rows:
        print(f"{name:<26}{tp:>12.4f}{tc:>12.4f}{tp / tc:>10.1f}{d:>12.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
