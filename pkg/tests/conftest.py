import math

import numpy as np
import pytest

from qmonogamy.linalg import make_rng
from qmonogamy.states import PureState, basis_state, bell_phi_plus, named_state, product

ACCEPTANCE_LINES = []


@pytest.fixture
def w3():
    return named_state("w3")


@pytest.fixture
def ghz3():
    return named_state("ghz3")


@pytest.fixture
def ghz_minus_w():
    return named_state("ghz_minus_w")


@pytest.fixture
def zero_phi_plus():
    """|0> (x) |Phi+>: qubit 0 unentangled."""
    return product(basis_state("0"), bell_phi_plus())


@pytest.fixture
def rng():
    return make_rng(20240611)


def plus_state():
    return PureState(1, np.array([1, 1]) / math.sqrt(2))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
