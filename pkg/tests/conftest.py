import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from partspec import finring as fr


@pytest.fixture(scope="session")
def f2():
    return fr.make_gf(2, 1)


@pytest.fixture(scope="session")
def f3():
    return fr.make_gf(3, 1)


@pytest.fixture(scope="session")
def f4():
    return fr.make_gf(2, 2)


@pytest.fixture(scope="session")
def f9():
    return fr.make_gf(3, 2)


@pytest.fixture(scope="session")
def m2f2(f2):
    return fr.make_matrix_ring(f2, 2)


@pytest.fixture(scope="session")
def m2f3(f3):
    return fr.make_matrix_ring(f3, 2)


@pytest.fixture(scope="session")
def t2f2(f2):
    return fr.make_triangular_ring(f2, 2)


@pytest.fixture(scope="session")
def f2xf2(f2):
    return fr.make_product(f2, f2)
