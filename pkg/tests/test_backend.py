import json
import os
import subprocess
import sys

import phibvp

SNIPPET = """
import json, phibvp
from phibvp.solver import solve_reduced
from phibvp.profile import reconstruct
spec = phibvp.make_problem(3.0, 1.0, 2.0, 1.0, 3.0)
red = solve_reduced(spec)
prof = reconstruct(red, spec, 101)
print(json.dumps([phibvp.BACKEND, red.alpha, float(prof.x[50])]))
"""


def _run(pure):
    env = dict(os.environ)
    env.pop("PHIBVP_PURE_PYTHON", None)
    if pure:
        env["PHIBVP_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", SNIPPET], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_backend_name():
    assert phibvp.BACKEND in ("cython", "python")


def test_pure_python_switch_gives_same_answers():
    b_pure, a_pure, x_pure = _run(True)
    b_def, a_def, x_def = _run(False)
    assert b_pure == "python"
    assert abs(a_pure - a_def) <= 1e-13 * a_def
    assert abs(x_pure - x_def) <= 1e-13
