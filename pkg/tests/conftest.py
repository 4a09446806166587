import math

import pytest
from hypothesis import assume, settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def loop_params(draw, c_min=0.05, c_max=5.0, g_min=-0.45, g_max=3.0, margin=1e-3):
    """(c, g) with Delta = (c-1)^2 + 2g comfortably positive."""
    c = draw(st.floats(c_min, c_max))
    g = draw(st.floats(g_min, g_max))
    delta = (c - 1.0) ** 2 + 2.0 * g
    assume(delta > margin and math.isfinite(delta))
    return c, g


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line, print it and fail the test if it did not pass."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {detail}"
        lines.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
