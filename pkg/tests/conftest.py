from fractions import Fraction

import pytest

from koszul.io import bundled_path
from koszul.models import CurveModel, mult_table


def unit(i, n):
    return [Fraction(int(i == j)) for j in range(n)]


@pytest.fixture
def data():
    return lambda name: str(bundled_path(name))


@pytest.fixture(scope="session")
def conic():
    return mult_table(CurveModel.rational(2))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
