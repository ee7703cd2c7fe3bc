import csv
import dataclasses
import io
import json

import numpy as np
import pytest

from phibvp import ConsistencyError, ContractError, make_problem
from phibvp.oracle import finite_difference_residual, shoot
from phibvp.profile import (
    extend_periodic, level_drift_series, reconstruct, reconstruct_neumann, transit_time,
)
from phibvp.solver import solve_reduced


@pytest.fixture(scope="module")
def neumann():
    spec = make_problem(3.0, 1.0, 2.0, 1.0, 3.0)
    red = solve_reduced(spec)
    return spec, red, reconstruct(red, spec)


@pytest.fixture(scope="module")
def periodic():
    spec = make_problem(-3.0, 1.0, 2.0, 2.4, 3.0, bc="periodic")
    red = solve_reduced(spec)
    return spec, red, reconstruct(red, spec)


def test_endpoint_identities(neumann):
    spec, red, prof = neumann
    i_tau = int(np.flatnonzero(prof.t == 1.0)[0])
    assert prof.x[0] == pytest.approx(red.alpha, abs=1e-8)
    assert prof.x[i_tau] == pytest.approx(red.x_star, abs=1e-8)
    assert prof.x[-1] == pytest.approx(red.beta, abs=1e-8)
    assert prof.t.size == 1001 and prof.t[-1] == 3.0


def test_strictly_decreasing(neumann):
    assert np.all(np.diff(neumann[2].x) < 0)


def test_level_sets(neumann):
    spec, red, prof = neumann
    assert np.max(level_drift_series(prof, red, spec)) < 1e-12
    assert prof.diagnostics["level_set_drift"] < 1e-12


def test_ode_residual(neumann):
    spec, _, prof = neumann
    res = finite_difference_residual(prof.t, prof.x, spec)
    assert np.nanmax(np.abs(res)) < 1e-4


@pytest.mark.parametrize("gamma,p,weights", [
    (3.0, 2.0, (1.0, 2.0, 1.0, 3.0)),
    (-3.0, 2.0, (1.0, 2.0, 2.4, 3.0)),
    (3.0, 3.0, (1.0, 2.0, 1.0, 3.0)),
    (-5.0, 3.0, (1.0, 2.0, 2.4, 3.0)),
])
def test_agrees_with_rk(gamma, p, weights):
    spec = make_problem(gamma, *weights, p=p)
    red = solve_reduced(spec)
    prof = reconstruct(red, spec, n_points=301)
    rk = shoot(red.alpha, spec, t_eval=prof.t)
    assert np.max(np.abs(rk.x - prof.x)) <= 1e-5


def test_transit_times(neumann):
    spec, red, prof = neumann
    for i in (50, 150, 300):
        t_low = transit_time(prof.x[i], red, spec, "lower")
        t_up = transit_time(prof.x[i], red, spec, "upper")
        assert t_low == pytest.approx(prof.t[i], abs=1e-8)
        assert t_low == pytest.approx(t_up, abs=1e-8)
    with pytest.raises(ContractError):
        transit_time(red.alpha * 1.1, red, spec)


def test_periodic_shape(periodic):
    spec, red, prof = periodic
    tau, T = spec.weight.tau, spec.weight.T
    assert prof.t[0] == 0.0 and prof.t[-1] == T
    assert np.all(np.diff(prof.t) > 0)
    assert prof.x[0] == prof.x[-1] and prof.y[0] == prof.y[-1]
    i_max, i_min = np.argmax(prof.x), np.argmin(prof.x)
    assert prof.t[i_max] == pytest.approx(tau / 2, abs=1e-12)
    assert prof.t[i_min] == pytest.approx((T + tau) / 2, abs=1e-12)
    assert prof.y[i_max] == 0.0 and prof.y[i_min] == 0.0


def test_periodic_even_symmetry(periodic):
    spec, _, prof = periodic
    tau, T = spec.weight.tau, spec.weight.T
    s = np.linspace(0.0, 0.5 * T, 97)
    right = np.interp(tau / 2 + s, prof.t, prof.x, period=T)
    left = np.interp(tau / 2 - s, prof.t, prof.x, period=T)
    np.testing.assert_allclose(right, left, atol=1e-8)


def test_periodic_closes_under_rk(periodic):
    spec, red, prof = periodic
    r = shoot(red.alpha, spec)
    assert max(abs(v) for v in r.residual_periodic) < 1e-8


def test_extend_needs_half_window(neumann):
    spec, _, prof = neumann
    with pytest.raises(ContractError):
        extend_periodic(prof, spec)


def test_half_window_piece():
    spec = make_problem(3.0, 1.0, 2.0, 1.0, 3.0, bc="periodic")
    half = reconstruct_neumann(solve_reduced(spec), spec, n_points=101)
    assert half.half_window and half.t[0] == 0.5 and half.t[-1] == 2.0
    assert half.y[0] == 0.0 and half.y[-1] == 0.0


def test_inconsistent_solution_detected(neumann):
    spec, red, _ = neumann
    with pytest.raises(ConsistencyError):
        reconstruct(dataclasses.replace(red, omega=4 * red.omega), spec, n_points=51)


def test_csv_and_json(neumann):
    _, _, prof = neumann
    buf = io.StringIO()
    prof.write_csv(buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["t", "x", "y"] and len(rows) == prof.t.size + 1
    assert float(rows[1][1]) == prof.x[0] and float(rows[500][2]) == prof.y[499]
    data = json.loads(prof.to_json())
    assert data["x"] == [float(v) for v in prof.x]


def test_deterministic(neumann):
    spec, red, prof = neumann
    again = reconstruct(red, spec)
    assert again.to_json() == prof.to_json()
