import math

import pytest

from sn2d.branch import BranchConstants
from sn2d.shooting import default_solution

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def sol0():
    return default_solution(0)


@pytest.fixture(scope="session")
def sol1():
    return default_solution(1)


@pytest.fixture(scope="session")
def sol2():
    return default_solution(2)


@pytest.fixture(scope="session")
def consts(sol0):
    return BranchConstants.from_solution(sol0)


@pytest.fixture
def record():
    def _record(number, name, passed, detail):
        line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


GAMMA_E = 0.5772156649015329
GAUSSIAN_I = -GAMMA_E / (4.0 * math.pi)
GAUSSIAN_V = (math.log(2.0) - GAMMA_E) / (4.0 * math.pi)
