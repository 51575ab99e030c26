import numpy as np
import pytest

from chainsurg import catalog


@pytest.fixture(scope="session")
def steane():
    return catalog.steane()


@pytest.fixture(scope="session")
def rm15():
    return catalog.reed_muller_15()


@pytest.fixture(scope="session")
def toric2():
    return catalog.toric(2)


@pytest.fixture(scope="session")
def surface2():
    return catalog.surface_patch(2, 2)


@pytest.fixture(scope="session")
def surface3():
    return catalog.surface_patch(3, 3)


def rng(seed=0):
    return np.random.RandomState(seed)
