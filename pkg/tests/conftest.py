from fractions import Fraction as F

import pytest

from aggelicit.model import AggregationOperation, Instance, alpha_q
from aggelicit.regression import load_case


@pytest.fixture
def ex_feasibility():
    _, inst, op = load_case("example_feasibility.json")
    return inst, op


@pytest.fixture
def ex_support():
    _, inst, op = load_case("example_support.json")
    return inst, op


@pytest.fixture
def ex_binding():
    _, inst, op = load_case("example_binding.json")
    return inst, op


@pytest.fixture
def insufficient_support():
    _, inst, op = load_case("insufficient_support.json")
    return inst, op


@pytest.fixture
def insufficient_binding():
    _, inst, op = load_case("insufficient_binding.json")
    return inst, op


@pytest.fixture
def addition_binding():
    _, inst, op = load_case("addition_binding.json")
    return inst, op


def vec(*xs):
    return tuple(F(x) for x in xs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
