from fractions import Fraction

import pytest

from toric_periods.instances import case_datum, reference_problem
from toric_periods.padic import Context
from toric_periods.quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra


@pytest.fixture(scope="session")
def ctx5():
    return Context(5, 10)


@pytest.fixture(scope="session")
def inert5(ctx5):
    return QuadAlgebra(ctx5, INERT)


@pytest.fixture(scope="session")
def ramified5(ctx5):
    return QuadAlgebra(ctx5, RAMIFIED)


@pytest.fixture(scope="session")
def split5(ctx5):
    return QuadAlgebra(ctx5, SPLIT)


@pytest.fixture(scope="session")
def case1():
    return case_datum(5, 1, 1)


@pytest.fixture
def reference():
    return reference_problem(5)


def frac(a, b=1):
    return Fraction(a, b)
