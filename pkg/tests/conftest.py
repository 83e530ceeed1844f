import numpy as np
import pytest

from lemniscates.counterexample import build_d4_chain, f4_polynomial
from lemniscates.curves import ellipse, unit_circle


@pytest.fixture(scope="session")
def f4():
    return f4_polynomial()


@pytest.fixture(scope="session")
def d4_chain():
    return build_d4_chain(step=0.01)


@pytest.fixture(scope="session")
def circle_T():
    return unit_circle(512)


@pytest.fixture(scope="session")
def ellipse_E():
    return ellipse(1.0, 0.6, 512)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
