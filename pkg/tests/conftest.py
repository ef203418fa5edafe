import numpy as np
import pytest

from linres.gf import Field
from linres.instances import LinearSystem, gen_instance


@pytest.fixture
def f5():
    return Field(5)


@pytest.fixture
def f7():
    return Field(7)


@pytest.fixture
def x0_eq_3(f5):
    """{x0 = 3} over F_5: the smallest 0-1 unsatisfiable system."""
    return LinearSystem.of([[1]], [3], f5)


@pytest.fixture
def sum_eq_3(f5):
    """{x0 + x1 = 3} over F_5."""
    return LinearSystem.of([[1, 1]], [3], f5)


@pytest.fixture(scope="session")
def rs_7_7_3():
    return gen_instance("rs", 7, 7, 3)


@pytest.fixture
def rng_factory():
    def make(seed):
        return np.random.default_rng(seed)

    return make
