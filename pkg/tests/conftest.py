import pytest

from routegame import build_classic_braess, build_priced_braess
from routegame.pricing import PriceSpec


@pytest.fixture(scope="session")
def classic_pair_10():
    return build_classic_braess(10)


@pytest.fixture(scope="session")
def classic_pair_2():
    return build_classic_braess(2)


@pytest.fixture(scope="session")
def priced_identity_pair_10():
    return build_priced_braess(10, PriceSpec("identity"))
