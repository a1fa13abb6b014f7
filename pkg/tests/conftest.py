import pytest

from meandric import parse_shape, simple_loop
from meandric.verify import STRONG_L6, WEAK_L5


@pytest.fixture(scope="session")
def loop1():
    """The simple loop of half-length 1."""
    return simple_loop()


@pytest.fixture(scope="session")
def strong_l6():
    """A strong shape of half-length 6 with nontrivial bounded faces."""
    return parse_shape(STRONG_L6)


@pytest.fixture(scope="session")
def weak_l5():
    """The weak shape of half-length 5 whose copies overlap at offset 7."""
    return parse_shape(WEAK_L5)
