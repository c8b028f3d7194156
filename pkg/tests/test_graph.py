import pytest
from hypothesis import given

from bridgekit.errors import GraphFormatError
from bridgekit.graph import (
    Graph,
    bipartition,
    connected_components,
    contract_all_bridges,
    dump_graph,
    find_bridges,
    identify_vertices,
    is_tree,
    load_graph,
    maximal_trees_of_bridges,
    tree_longest_path,
)

from .conftest import make_graph
from .strategies import graphs, trees


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def test_load_path_on_three_vertices():
    g = load_graph("p 3 2\ne 1 2\ne 2 3\n")
    assert g.n == 3 and g.edges() == [(1, 2), (2, 3)]


def test_load_single_isolated_vertex():
    g = load_graph("p 1 0\n")
    assert g.n == 1 and g.m == 0


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("p 2 1\ne 1 1\n", 2),           # self-loop
        ("p 2 2\ne 1 2\ne 2 1\n", 3),    # duplicate edge, reversed
        ("p 2 1\ne 1 3\n", 2),           # endpoint out of range
        ("p 2 1\nq 1 2\n", 2),           # unknown record
        ("p 2 1\ne one 2\n", 2),         # malformed int
    ],
)
def test_load_errors_carry_line_numbers(text, lineno):
    with pytest.raises(GraphFormatError) as err:
        load_graph(text)
    assert err.value.line_no == lineno


def test_load_rejects_edge_count_mismatch():
    with pytest.raises(GraphFormatError):
        load_graph("p 3 2\ne 1 2\n")


def test_dump_roundtrip_is_bit_exact():
    text = "p 4 1\n# a comment\nv 3\nv 4\ne 1 2\n"
    canonical = dump_graph(load_graph(text))
    assert canonical == "p 4 1\nv 3\nv 4\ne 1 2\n"
    assert dump_graph(load_graph(canonical)) == canonical


@given(graphs())
def test_dump_load_preserves_structure(g):
    back = load_graph(dump_graph(g))
    assert back.n == g.n and back.m == g.m


# ---------------------------------------------------------------------------
# components
# ---------------------------------------------------------------------------


def test_components_empty_graph():
    assert connected_components(Graph.empty()) == []


def test_components_two_triangles():
    g = make_graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
    comps = connected_components(g)
    assert [sorted(c) for c in comps] == [[1, 2, 3], [4, 5, 6]]


def test_components_path(path5):
    assert len(connected_components(path5)) == 1


# ---------------------------------------------------------------------------
# bridges
# ---------------------------------------------------------------------------


def naive_bridges(g):
    base = len(connected_components(g))
    return frozenset(
        e for e in g.edges() if len(connected_components(g.delete_edges([e]))) > base
    )


def test_bridges_path_all_edges():
    g = make_graph(3, [(1, 2), (2, 3)])
    assert find_bridges(g) == frozenset({(1, 2), (2, 3)})


def test_bridges_triangle_none(triangle):
    assert find_bridges(triangle) == frozenset()


def test_bridges_two_triangles_exactly_the_connector(two_triangles_bridge):
    assert find_bridges(two_triangles_bridge) == frozenset({(1, 4)})


@given(graphs())
def test_bridges_match_deletion_definition(g):
    assert find_bridges(g) == naive_bridges(g)


# ---------------------------------------------------------------------------
# contraction and trees of bridges
# ---------------------------------------------------------------------------


def test_contract_forest_to_one_vertex_per_component():
    g = make_graph(5, [(1, 2), (2, 3), (4, 5)])
    out, mapping = contract_all_bridges(g)
    assert out.n == 2 and out.m == 0
    assert mapping[1] == mapping[2] == mapping[3]
    assert mapping[4] == mapping[5] != mapping[1]


def test_contract_two_triangles_gives_bowtie(two_triangles_bridge):
    out, mapping = contract_all_bridges(two_triangles_bridge)
    # bowtie: two triangles sharing one vertex
    assert out.n == 5 and out.m == 6
    degrees = sorted(out.degree(v) for v in out.vertices())
    assert degrees == [2, 2, 2, 2, 4]
    assert mapping[1] == mapping[4]


def test_contract_cycle_is_fixpoint():
    c4 = make_graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    out, mapping = contract_all_bridges(c4)
    assert out == c4 and mapping == {v: v for v in range(1, 5)}


@given(graphs())
def test_contract_is_idempotent(g):
    once, _ = contract_all_bridges(g)
    twice, _ = contract_all_bridges(once)
    assert twice == once


@given(graphs())
def test_contracted_edges_have_unique_preimage(g):
    out, mapping = contract_all_bridges(g)
    for u, v in out.edges():
        crossing = [
            e for e in g.edges() if {mapping[e[0]], mapping[e[1]]} == {u, v}
        ]
        assert len(crossing) == 1


def test_trees_of_bridges_whole_path(path5):
    blocks = maximal_trees_of_bridges(path5)
    assert blocks == [frozenset({1, 2, 3, 4, 5})]


def test_trees_of_bridges_cycle_singletons():
    c5 = make_graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    assert maximal_trees_of_bridges(c5) == [frozenset({v}) for v in range(1, 6)]


def test_trees_of_bridges_bowtie_with_pendant():
    # bowtie on 1..5 (center 1) plus pendant edge at outer vertex 2
    g = make_graph(
        6, [(1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5), (2, 6)]
    )
    blocks = maximal_trees_of_bridges(g)
    by_min = {min(b): b for b in blocks}
    assert by_min[2] == frozenset({2, 6})
    assert all(len(b) == 1 for b in blocks if min(b) != 2)


@given(graphs())
def test_trees_of_bridges_partition_into_trees(g):
    blocks = maximal_trees_of_bridges(g)
    union = set()
    for b in blocks:
        assert not (b & union)
        union |= b
        assert is_tree(g.induced(b).delete_edges(
            [e for e in g.induced(b).edges() if e not in find_bridges(g)]
        )) or len(b) == 1 or is_tree(g.induced(b))
    assert union == g.vertex_set()


# ---------------------------------------------------------------------------
# identification, deletion
# ---------------------------------------------------------------------------


def test_identify_path_ends_gives_single_edge():
    p3 = make_graph(3, [(1, 2), (2, 3)])
    out, w = identify_vertices(p3, 1, 3)
    assert out.n == 2 and out.edges() == [(2, w)]
    assert out.provenance(w) == frozenset({1, 3})


def test_identify_contract_triangle_edge(triangle):
    out, w = identify_vertices(triangle, 1, 2)
    assert out.n == 2 and out.m == 1  # no self-loop


def test_identify_isolated_vertices():
    g = make_graph(2, [])
    out, w = identify_vertices(g, 1, 2)
    assert out.n == 1 and out.m == 0


def test_identify_unknown_id(triangle):
    with pytest.raises(ValueError):
        identify_vertices(triangle, 1, 9)


def test_delete_everything(triangle):
    assert triangle.delete_vertices({1, 2, 3}).n == 0


def test_delete_vertex_of_triangle(triangle):
    out = triangle.delete_vertices({3})
    assert out.edges() == [(1, 2)]


def test_delete_edge_of_cycle():
    c4 = make_graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    out = c4.delete_edges([(1, 4)])
    assert out.m == 3 and find_bridges(out) == frozenset(out.edges())


@given(graphs())
def test_provenance_sets_stay_disjoint_under_contraction(g):
    out, _ = contract_all_bridges(g)
    seen = set()
    for v in out.vertices():
        p = out.provenance(v)
        assert not (p & seen)
        seen |= p


# ---------------------------------------------------------------------------
# longest paths in trees
# ---------------------------------------------------------------------------


def _double_bfs_diameter(t):
    # classic oracle: BFS twice, count edges on the longest path
    from collections import deque

    def farthest(src):
        dist = {src: 0}
        q = deque([src])
        while q:
            v = q.popleft()
            for w in t.neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        far = max(dist.values())
        return far, dist

    v0 = t.vertices()[0]
    _, d0 = farthest(v0)
    u = min(v for v in d0 if d0[v] == max(d0.values()))
    far, _ = farthest(u)
    return far


def test_longest_path_single_vertex():
    g = make_graph(1, [])
    assert tree_longest_path(g) == [1]


def test_longest_path_star_goes_through_center():
    star = make_graph(4, [(1, 2), (1, 3), (1, 4)])
    path = tree_longest_path(star)
    assert len(path) == 3 and path[1] == 1


def test_longest_path_spider_picks_two_longest_legs():
    # legs of lengths 3 (2,3,4), 2 (5,6), 1 (7) from center 1
    spider = make_graph(7, [(1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (1, 7)])
    path = tree_longest_path(spider)
    assert len(path) - 1 == _double_bfs_diameter(spider) == 5
    assert path == [4, 3, 2, 1, 5, 6]


def test_longest_path_rejects_non_trees(triangle):
    with pytest.raises(ValueError):
        tree_longest_path(triangle)


@given(trees())
def test_longest_path_matches_double_bfs_length(t):
    assert len(tree_longest_path(t)) - 1 == _double_bfs_diameter(t)


# ---------------------------------------------------------------------------
# bipartition helper
# ---------------------------------------------------------------------------


def test_bipartition_odd_cycle_fails(triangle):
    assert bipartition(triangle) is None


def test_bipartition_even_cycle():
    c4 = make_graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    a, b = bipartition(c4)
    assert a == frozenset({1, 3}) and b == frozenset({2, 4})
