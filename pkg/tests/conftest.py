import numpy as np
import pytest

from ekfrac.operators import OperatorParams

# acceptance results, filled by test_acceptance and echoed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[(0.25, 0.65), (0.7, 0.15), (0.5, 0.5), (0.9, 1.0)])
def params(request):
    return OperatorParams(*request.param)
