import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bridgekit.enumeration import (
    KNOWN_CONNECTED_COUNTS,
    KNOWN_GRAPH_COUNTS,
    all_graphs,
    canonical_key,
    connected_graphs,
    random_bipartite,
    random_graph,
    random_modulator_instance,
)
from bridgekit.graph import Graph
from bridgekit.depth import is_bd_at_most

from .conftest import make_graph
from .strategies import graphs


@pytest.mark.parametrize("n", range(0, 7))
def test_counts_match_published_values(n):
    assert len(all_graphs(n)) == KNOWN_GRAPH_COUNTS[n]
    if n >= 1:
        assert len(connected_graphs(n)) == KNOWN_CONNECTED_COUNTS[n]


def test_no_two_generated_graphs_are_isomorphic():
    keys = [canonical_key(g) for g in all_graphs(6)]
    assert len(keys) == len(set(keys))


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_key_is_relabeling_invariant(g, r):
    perm = g.vertices()
    r.shuffle(perm)
    mapping = dict(zip(g.vertices(), perm))
    relabeled = Graph.from_edges(
        perm, [(mapping[u], mapping[v]) for u, v in g.edges()]
    )
    assert canonical_key(relabeled) == canonical_key(g)


def test_canonical_key_separates_same_degree_sequence():
    # C6 versus two triangles: both 2-regular on six vertices
    c6 = make_graph(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)])
    tri2 = make_graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
    assert canonical_key(c6) != canonical_key(tri2)


def test_random_generators_are_seed_deterministic():
    a = random_graph(random.Random(5), 8, 0.3)
    b = random_graph(random.Random(5), 8, 0.3)
    assert a == b
    g1, x1 = random_modulator_instance(random.Random(9), 2)
    g2, x2 = random_modulator_instance(random.Random(9), 2)
    assert g1 == g2 and x1 == x2


def test_random_modulator_instances_respect_depth_bound():
    rng = random.Random(31)
    for _ in range(60):
        c = rng.choice([1, 2])
        g, xs = random_modulator_instance(rng, c)
        assert is_bd_at_most(g.induced(g.vertex_set() - xs), c)


def test_random_bipartite_structure():
    g, a, b = random_bipartite(random.Random(3), 4, 5, 0.5)
    assert a | b == g.vertex_set()
    for u, v in g.edges():
        assert (u in a) != (v in a)
