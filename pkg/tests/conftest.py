import pytest

from selcol import parse_instance

from strategies import FIG1_TEXT

ACCEPTANCE_LINES = []


@pytest.fixture
def fig1():
    return parse_instance(FIG1_TEXT)


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
