import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

BACKENDS = ("numba", "numpy")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def running_K():
    return np.array([[0.5, 0.25], [0.25, 0.5]])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
    missing = sorted(set(range(1, 11)) - set(RESULTS))
    for number in missing:
        terminalreporter.write_line(f"[FAIL] criterion {number:2d}: did not complete")
