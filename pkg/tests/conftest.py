import numpy as np
import pytest

import gaugecool
from gaugecool.model import LinkConfig


@pytest.fixture
def log():
    return []


@pytest.fixture
def env():
    return gaugecool.Environment()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_config(rng):
    """Factory for link configurations off the unitary manifold."""
    def make(n=3, N=4, spread=1.0, imaginary=0.3):
        return LinkConfig.random(n, N, rng, spread=spread, imaginary=imaginary)
    return make
