import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from axisns.grid import build_grid
from axisns.profiles import bump
from axisns.solver import state_from_arrays

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def unit_grid():
    return build_grid(4, 4, 1.0, 1.0)


@pytest.fixture
def grid32():
    return build_grid(32, 32, 2.0, 2.0)


def swirl_ring_state(g, swirl=1.0, ring=1.0):
    """Compact swirl bump plus an oddly mirrored vortex ring."""
    r, z = g.mesh()
    zc = 0.5 * g.z_len
    gam = swirl * r * r * bump(np.hypot(r, z - zc) / 0.9)
    om = ring * r * bump(np.hypot(r - 0.4, z - zc) / 0.3)
    return state_from_arrays(g, gam, om)


@pytest.fixture
def ring_state(grid32):
    return swirl_ring_state(grid32)


ACCEPTANCE_LINES: list[str] = []


def report(number, title, passed, detail):
    """Record and print one acceptance line; the caller asserts ``passed``."""
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
