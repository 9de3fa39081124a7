import pytest

from jostlab.jost import JostCalculator
from jostlab.potentials import Potential1, Potential2, Potential3
from jostlab.rmatrix import RMatrixSystem

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def pot1():
    return Potential1()


@pytest.fixture(scope="session")
def pot2():
    return Potential2()


@pytest.fixture(scope="session")
def pot3():
    return Potential3()


@pytest.fixture(scope="session")
def sys1(pot1):
    return RMatrixSystem.build(pot1, 40, 5.0)


@pytest.fixture(scope="session")
def sys2(pot2):
    return RMatrixSystem.build(pot2, 70, 5.0)


@pytest.fixture(scope="session")
def sys3(pot3):
    return RMatrixSystem.build(pot3, 50, 5.0)


@pytest.fixture(scope="session")
def calc1(sys1):
    return JostCalculator(sys1)


@pytest.fixture(scope="session")
def calc2(sys2):
    return JostCalculator(sys2)


@pytest.fixture(scope="session")
def calc3(sys3):
    return JostCalculator(sys3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
