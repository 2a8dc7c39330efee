import pytest

from froude_bound.core import bernoulli_from_depth


@pytest.fixture
def r_of():
    return bernoulli_from_depth


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, _line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for name, ok, detail in RESULTS:
            terminalreporter.write_line(_line(name, ok, detail))
