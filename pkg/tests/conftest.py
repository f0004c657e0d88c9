import math
import sys

import pytest

from fracvim.vim import sinusoidal_problem

ALPHA_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


def rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture(params=[0.2, 0.4, 0.6, 0.8], ids=lambda a: f"alpha={a}")
def profile_problem(request):
    return sinusoidal_problem(request.param)


@pytest.fixture
def half_pi():
    return math.pi / 2


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
