import numpy as np
import pytest

from sparse_ad_library.models.base import ResidualModel
from sparse_ad_library.models.lorenz import REFERENCE_PARAMS, REFERENCE_STATE, LorenzModel

SEED = 12345


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def lorenz_reference():
    """ Lorenz with (x, y, z) unknown at the reference point. """
    return LorenzModel(REFERENCE_PARAMS, REFERENCE_STATE)


@pytest.fixture
def lorenz_swapped():
    """ Lorenz with (sigma, rho, beta) unknown at the reference point. """
    return LorenzModel(REFERENCE_PARAMS, REFERENCE_STATE, swap_roles=True)


class CallCounter(ResidualModel):
    """ Wraps a `ResidualModel` and counts residual evaluations. """

    def __init__(self, model):
        self.model = model
        self.name = model.name
        self.calls = 0

    @property
    def dimension(self):
        return self.model.dimension

    def residual(self, f, x):
        self.calls += 1
        self.model.residual(f, x)


class FunctionModel(ResidualModel):
    """ `ResidualModel` from a function f(x) -> list, for small test systems. """

    def __init__(self, func, dimension, name="function"):
        self.func = func
        self._dimension = dimension
        self.name = name

    @property
    def dimension(self):
        return self._dimension

    def residual(self, f, x):
        f[:] = self.func(x)
