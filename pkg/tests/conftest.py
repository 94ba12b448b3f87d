import numpy as np
import pytest


def upper_points(k=10, seed=0):
    rng = np.random.default_rng(seed)
    return [complex(x, y) for x, y in zip(rng.uniform(-3, 3, k), rng.uniform(0.1, 3, k))]


@pytest.fixture
def points():
    return upper_points()
