import pytest

from ptairy import locus

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def branches_200():
    """Branches 1..6 traced from small eps to eps = 200."""
    return {k: locus.trace_branch(k, None, 200.0) for k in range(1, 7)}


@pytest.fixture(scope="session")
def branches_14():
    return {k: locus.trace_branch(k, 0.1, 14.0) for k in (1, 2)}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
