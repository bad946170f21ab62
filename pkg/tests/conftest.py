import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def grids25():
    """The four c=25 threshold grids, computed once per session."""
    from collusion_capacity.scan import threshold_grid
    return {(gap, dec): threshold_grid(25, gap, dec)
            for gap in ("coin", "int") for dec in ("simple", "joint")}


@pytest.fixture
def acceptance():
    def report(number, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}")
        assert ok, detail
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
