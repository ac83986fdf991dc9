import pytest

from dioflow import experiments as ex

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def d1_pool():
    return ex.build_d1_pool(60)


@pytest.fixture(scope="session")
def d2_pool():
    return ex.build_d2_pool(48)


@pytest.fixture(scope="session")
def report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
