import numpy as np
import pytest

from mixedquerm import SampleStream, convex_hull, random_polytope


def rand_poly(seed, dim=3, count=8):
    return random_polytope(SampleStream(seed), dim, count)


@pytest.fixture
def square():
    return convex_hull([[0, 0], [1, 0], [0, 1], [1, 1]])


@pytest.fixture
def polys3():
    return [rand_poly(100 + k, 3, 6 + k % 5) for k in range(10)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
