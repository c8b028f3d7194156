import random

import pytest
from hypothesis import HealthCheck, settings

from bridgekit.graph import Graph

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return random.Random(20240810)


def make_graph(n, edges):
    return Graph.from_edges(range(1, n + 1), edges)


@pytest.fixture
def path5():
    return make_graph(5, [(1, 2), (2, 3), (3, 4), (4, 5)])


@pytest.fixture
def triangle():
    return make_graph(3, [(1, 2), (2, 3), (1, 3)])


@pytest.fixture
def two_triangles_bridge():
    # two vertex-disjoint triangles joined by a single bridge
    return make_graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4)])
