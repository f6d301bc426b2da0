from fractions import Fraction

import pytest

from balansol.graph import WeightedMultigraph, parse_graph
from balansol.oracle import path_big

I1_TEXT = "vertices 2\nedge 0 1 1\n"
I2_TEXT = "vertices 2\nedge 0 1 1\nedge 0 1 1\nedge 0 1 1\n"
LOOP_TEXT = "vertices 1\nedge 0 0 1/2\n"
TRIANGLE_TEXT = "vertices 3\nedge 0 1 1\nedge 1 2 1\nedge 2 0 1\n"


@pytest.fixture
def i1() -> WeightedMultigraph:
    return parse_graph(I1_TEXT)


@pytest.fixture
def i2() -> WeightedMultigraph:
    return parse_graph(I2_TEXT)


@pytest.fixture
def loop() -> WeightedMultigraph:
    return parse_graph(LOOP_TEXT)


@pytest.fixture
def triangle() -> WeightedMultigraph:
    return parse_graph(TRIANGLE_TEXT)


@pytest.fixture
def big_path() -> WeightedMultigraph:
    # path v1 - v2 - v3 - v4 is vertices 0..3; leaves 4..9
    return path_big([Fraction(1), Fraction(17, 20), Fraction(9, 10)], stubs=3)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
