import pytest

from gravdit.constants import get_particle
from gravdit.scenario_b import grav_state


@pytest.fixture(scope="session")
def ucn():
    return get_particle("ucn")


@pytest.fixture(scope="session")
def neutron_state(ucn):
    return grav_state(1, ucn)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
