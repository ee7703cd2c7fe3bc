import os

import pytest
from hypothesis import HealthCheck, settings

from phibvp import make_problem

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# filled by test_acceptance.py; printed once at the end of the session
CRITERION_LINES: dict[int, str] = {}


@pytest.fixture
def neg_mean():
    """gamma = 3, a+ = 1, a- = 2, tau = 1, T = 3 (mean weight -3)."""
    return make_problem(3.0, 1.0, 2.0, 1.0, 3.0)


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERION_LINES):
        terminalreporter.write_line(CRITERION_LINES[k])
