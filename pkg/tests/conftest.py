import hypothesis
import numpy as np
import pytest

from lagspec.family import derive_params

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def k52():
    return derive_params(5, 2)


@pytest.fixture(scope="session")
def k74():
    return derive_params(7, 4)


@pytest.fixture(scope="session")
def index52(k52):
    from lagspec.spectral import index_report
    return index_report(k52, 1024)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
