import warnings

import pytest

from ghostpin.setup import OpticalSetup


@pytest.fixture
def fig2c():
    """Double-slit example: sigma_p = 167 um, d = 30 cm, sinc, paraxial."""
    return OpticalSetup()


@pytest.fixture
def fig4():
    return OpticalSetup(sigma_p=258e-6, d=1.0)


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
