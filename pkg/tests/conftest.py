import numpy as np
import pytest

from cventropic import GridSpec, default_grid_1d, default_grid_2d, make_vacuum


@pytest.fixture(scope="session")
def grid1():
    return default_grid_1d()


@pytest.fixture(scope="session")
def grid2():
    return default_grid_2d()


@pytest.fixture(scope="session")
def small_grid2():
    # fast 2-D grid for sweeps that do not need acceptance-level accuracy
    return GridSpec(128, 10.0, 2)


@pytest.fixture(scope="session")
def vacuum1(grid1):
    return make_vacuum(grid1)


@pytest.fixture(scope="session")
def vacuum2(grid2):
    return make_vacuum(grid2)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
