import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from loomnav.kinematics import VehicleState

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=2000, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def state(x, y, heading, speed=1.0):
    return VehicleState.from_heading((x, y), heading, speed)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(rng, spread=10.0, speed=None):
    return VehicleState.from_heading(rng.uniform(-spread, spread, 2), rng.uniform(-math.pi, math.pi),
                                     rng.uniform(0.5, 15.0) if speed is None else speed)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion, then assert it."""
    def record(number, name, ok, detail=""):
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
