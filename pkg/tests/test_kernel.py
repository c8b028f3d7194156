import json
import random

import pytest

from bridgekit.graph import Graph, connected_components
from bridgekit.depth import is_bd_at_most, lowering_tree
from bridgekit.enumeration import random_modulator_instance
from bridgekit.independence import alpha_value, conf
from bridgekit.kernel import (
    Instance,
    RootType,
    absorb_a_leaves,
    chunk_degree,
    conflict_structures,
    dump_instance,
    enumerate_chunks,
    find_conflict_structure,
    is_almost_free,
    is_free,
    kernelize,
    load_instance,
    meta_rule_1,
    meta_rule_2,
    meta_rule_3,
    pending_decomposition,
    replay_trace,
    rule_chunk_degree,
    rule_free,
    verify_equivalence,
)

from .conftest import make_graph


def inst_of(n, edges, xs, k, c):
    return Instance(make_graph(n, edges), frozenset(xs), k, c)


def tree_of(g, vertices, edges):
    return Graph.from_edges(vertices, edges)


# ---------------------------------------------------------------------------
# instances and chunks
# ---------------------------------------------------------------------------


def test_instance_validation_rejects_deep_remainder():
    # remainder K4 has bridge-depth 3 > 1
    k4 = [(i, j) for i in range(1, 5) for j in range(i + 1, 5)]
    inst = inst_of(5, k4 + [(1, 5)], {5}, 1, 1)
    with pytest.raises(ValueError):
        inst.validate()


def test_chunks_of_independent_modulator():
    inst = inst_of(4, [(1, 4)], {1, 2, 3}, 1, 1)
    got = [sorted(ch) for ch in enumerate_chunks(inst)]
    assert got == [[1], [2], [3], [1, 2], [1, 3], [2, 3]]


def test_chunks_single_vertex():
    inst = inst_of(2, [(1, 2)], {1}, 1, 1)
    assert enumerate_chunks(inst) == [frozenset({1})]


def test_chunks_of_clique_modulator_are_singletons():
    inst = inst_of(4, [(1, 2), (1, 3), (2, 3)], {1, 2, 3}, 1, 1)
    got = [sorted(ch) for ch in enumerate_chunks(inst)]
    assert got == [[1], [2], [3]]


def test_chunk_degree_counts_conflicted_components():
    # x dominates each of three disjoint edges
    edges = [(1, 2), (3, 4), (5, 6)] + [(7, v) for v in range(1, 7)]
    inst = inst_of(7, edges, {7}, 3, 1)
    assert chunk_degree(inst, frozenset({7})) == 3


def test_chunk_degree_zero_with_one_endpoint_per_edge():
    # touching one endpoint of an edge never lowers its independence number
    edges = [(1, 2), (3, 4), (5, 6), (7, 1), (7, 3), (7, 5)]
    inst = inst_of(7, edges, {7}, 3, 1)
    assert chunk_degree(inst, frozenset({7})) == 0


def test_chunk_degree_single_dominated_component():
    inst = inst_of(3, [(1, 2), (3, 1), (3, 2)], {3}, 1, 1)
    assert chunk_degree(inst, frozenset({3})) == 1


# ---------------------------------------------------------------------------
# free and almost-free
# ---------------------------------------------------------------------------


def test_free_without_modulator_neighbors():
    inst = inst_of(3, [(1, 2)], {3}, 1, 1)
    assert is_free(inst, {1, 2})


def test_free_despite_modulator_edges():
    # x attached at the midpoint of a path: alpha of the component is unaffected
    inst = inst_of(4, [(1, 2), (2, 3), (4, 2)], {4}, 2, 1)
    assert conf(inst.graph, {1, 2, 3}, {4}) == 0
    assert is_free(inst, {1, 2, 3})


def test_free_implies_almost_free_for_every_threshold():
    inst = inst_of(3, [(1, 2)], {3}, 1, 1)
    for x in range(0, 5):
        assert is_almost_free(inst, {1, 2}, x)


def test_not_almost_free_when_conflict_is_small():
    # the chunk {3} conflicts on the singleton component {1} and once in total
    inst = inst_of(3, [(1, 3)], {3}, 1, 1)
    assert not is_free(inst, {1})
    assert is_almost_free(inst, {1}, 1)
    assert not is_almost_free(inst, {1}, 2)


# ---------------------------------------------------------------------------
# component rules
# ---------------------------------------------------------------------------


def test_rule_free_removes_isolated_component_and_pays_alpha():
    inst = inst_of(4, [(1, 2), (2, 3), (1, 3)], {4}, 3, 2)
    out, event = rule_free(inst)
    assert event["dk"] == -1  # alpha of a triangle
    assert out.graph.vertex_set() == frozenset({4})
    assert out.k == 2


def test_rule_free_not_applicable():
    inst = inst_of(2, [(1, 2)], {2}, 1, 1)
    assert rule_free(inst) is None


def test_rule_free_fires_on_conflict_free_component_with_edges():
    inst = inst_of(4, [(1, 2), (2, 3), (4, 2)], {4}, 2, 1)
    out, event = rule_free(inst)
    assert event["vertices"] == [1, 2, 3]
    assert out.k == 0


def test_rule_chunk_degree_cuts_and_enables_free():
    # one modulator vertex dominating two single-vertex components:
    # degree 2 >= |X|+1, so the first component's edges get cut
    inst = inst_of(3, [(3, 1), (3, 2)], {3}, 1, 1)
    out, event = rule_chunk_degree(inst)
    assert event["edges"] == [[1, 3]]
    follow, ev2 = rule_free(out)
    assert ev2["vertices"] == [1]


def test_rule_chunk_degree_blocked_by_low_degree_chunk():
    inst = inst_of(2, [(2, 1)], {2}, 1, 1)
    assert rule_chunk_degree(inst) is None


# ---------------------------------------------------------------------------
# pending decompositions and types
# ---------------------------------------------------------------------------


def test_pending_whole_tree_all_forced():
    inst = inst_of(4, [(1, 2), (2, 3)], {4}, 2, 1)
    tree = tree_of(inst.graph, [1, 2, 3], [(1, 2), (2, 3)])
    decomp = pending_decomposition(inst, frozenset({1, 2, 3}), tree)
    assert all(
        decomp.type_of(v) == RootType.FORCED and decomp.pending(v) == frozenset({v})
        for v in (1, 2, 3)
    )


def test_pending_triangle_makes_root_avoidable():
    # tree = the two bridges 1-2, 2-3; a triangle hangs at 3
    edges = [(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
    inst = inst_of(6, edges + [(6, 1)], {6}, 2, 2)
    tree = tree_of(inst.graph, [1, 2, 3], [(1, 2), (2, 3)])
    decomp = pending_decomposition(inst, frozenset(range(1, 6)), tree)
    assert decomp.pending(3) == frozenset({3, 4, 5})
    assert decomp.type_of(3) == RootType.AVOIDABLE
    assert decomp.type_of(1) == RootType.FORCED


def test_pending_types_depend_on_the_passed_tree():
    # under the full tree the root 2 is forced (its pending component is {2});
    # under the shorter path, leaf 4 joins 2's pending component and 2 flips
    edges = [(1, 2), (2, 3), (2, 4)]
    inst = inst_of(5, edges + [(5, 1)], {5}, 2, 1)
    comp = frozenset({1, 2, 3, 4})
    full = tree_of(inst.graph, [1, 2, 3, 4], edges)
    path = tree_of(inst.graph, [1, 2, 3], [(1, 2), (2, 3)])
    assert pending_decomposition(inst, comp, full).type_of(2) == RootType.FORCED
    decomp = pending_decomposition(inst, comp, path)
    assert decomp.pending(2) == frozenset({2, 4})
    assert decomp.type_of(2) == RootType.AVOIDABLE


def test_pending_rejects_non_bridge_tree(triangle):
    inst = Instance(triangle, frozenset(), 1, 2)
    bad = tree_of(triangle, [1, 2], [(1, 2)])
    with pytest.raises(ValueError):
        pending_decomposition(inst, triangle.vertex_set(), bad)


# ---------------------------------------------------------------------------
# conflict structures
# ---------------------------------------------------------------------------


def _decomp_for(edges, tree_vertices, tree_edges, xs=(), n=None, c=2):
    n = n or max(max(e) for e in edges)
    inst = inst_of(n, edges, set(xs), 2, c)
    comp = next(
        c_ for c_ in connected_components(inst.remainder_graph()) if set(tree_vertices) <= c_
    )
    tree = tree_of(inst.graph, tree_vertices, tree_edges)
    return inst, pending_decomposition(inst, comp, tree)


def test_kind1_found_on_edge_with_avoidable_endpoint():
    # triangle pending at 3 makes it avoidable
    inst, decomp = _decomp_for(
        [(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)], [1, 2, 3], [(1, 2), (2, 3)]
    )
    cs = find_conflict_structure(inst, decomp, 1)
    assert cs and cs.kind == 1 and cs.roots == (2, 3)


def test_kind2_found_on_forced_degree2_pair():
    inst, decomp = _decomp_for(
        [(1, 2), (2, 3), (3, 4)], [1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)]
    )
    cs = find_conflict_structure(inst, decomp, 2)
    assert cs and cs.roots == (2, 3, 4, 1)  # path (u2,v1,v2,u1) = (1,2,3,4)


def test_kind2_absent_on_star():
    star = [(1, 2), (1, 3), (1, 4)]
    inst, decomp = _decomp_for(star, [1, 2, 3, 4], star)
    assert find_conflict_structure(inst, decomp, 2) is None


def test_kind3_forced_leaf():
    inst, decomp = _decomp_for([(1, 2)], [1, 2], [(1, 2)])
    cs = find_conflict_structure(inst, decomp, 3)
    assert cs and cs.roots == (1,) and cs.vertices == frozenset({1})


def test_kind4_leaf_through_degree2_parent():
    inst, decomp = _decomp_for([(1, 2), (2, 3)], [1, 2, 3], [(1, 2), (2, 3)])
    cs = find_conflict_structure(inst, decomp, 4)
    assert cs and cs.roots == (1, 2, 3)


# ---------------------------------------------------------------------------
# absorption
# ---------------------------------------------------------------------------


def test_absorb_keeps_trees_without_avoidable_leaves():
    inst, decomp = _decomp_for([(1, 2), (2, 3)], [1, 2, 3], [(1, 2), (2, 3)])
    assert absorb_a_leaves(decomp).vertex_set() == frozenset({1, 2, 3})


def test_absorb_drops_avoidable_leaf_under_forced_parent():
    # leaf 3 carries a pendant triangle (avoidable); its parent 2 is bare (forced)
    edges = [(2, 3), (3, 4), (3, 5), (4, 5)]
    inst, decomp = _decomp_for(edges, [2, 3], [(2, 3)], n=5)
    assert decomp.type_of(3) == RootType.AVOIDABLE
    assert decomp.type_of(2) == RootType.FORCED
    pruned = absorb_a_leaves(decomp)
    assert pruned.vertex_set() == frozenset({2})
    # the former parent keeps its type once the leaf is absorbed
    comp = frozenset(range(2, 6))
    after = pending_decomposition(inst, comp, pruned)
    assert after.type_of(2) == RootType.FORCED


def test_absorb_single_pass_reaches_fixpoint(rng):
    for _ in range(60):
        n = rng.randint(2, 9)
        edges = []
        for v in range(2, n + 1):
            edges.append((rng.randint(1, v - 1), v))
        extra = n + 1
        g_edges = list(edges)
        # hang triangles on random vertices to create avoidable roots
        for v in range(1, n + 1):
            if rng.random() < 0.4:
                g_edges += [(v, extra), (v, extra + 1), (extra, extra + 1)]
                extra += 2
        x = extra
        g_edges.append((x, 1))
        inst = Instance(
            make_graph(x, g_edges), frozenset({x}), 2, 2
        )
        comp = next(iter(connected_components(inst.remainder_graph())))
        tree = tree_of(inst.graph, list(range(1, n + 1)), edges)
        decomp = pending_decomposition(inst, comp, tree)
        pruned = absorb_a_leaves(decomp)
        after = pending_decomposition(inst, comp, pruned)
        again = absorb_a_leaves(after)
        assert again.vertex_set() == pruned.vertex_set()


# ---------------------------------------------------------------------------
# meta-rules
# ---------------------------------------------------------------------------


def test_meta_rule_1_vacuous_threshold_cuts_edge():
    # both pending components untouched by the modulator: almost-free vacuously
    edges = [(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
    inst = inst_of(6, edges + [(6, 1)], {6}, 2, 2)
    tree = tree_of(inst.graph, [1, 2, 3], [(1, 2), (2, 3)])
    got = meta_rule_1(inst, tree)
    assert got is not None
    out, event = got
    assert event["edges"] == [[2, 3]] and event["dk"] == 0
    assert not out.graph.has_edge(2, 3)


def test_meta_rule_2_alpha_relationship():
    # pure path remainder: identify across the middle pair, k drops by one
    inst = inst_of(5, [(1, 2), (2, 3), (3, 4)], {5}, 2, 1)
    tree = tree_of(inst.graph, [1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)])
    got = meta_rule_2(inst, tree)
    assert got is not None
    out, event = got
    assert event["dk"] == -1
    assert (alpha_value(inst.graph) >= inst.k) == (alpha_value(out.graph) >= out.k)


def test_meta_rule_3_on_broom_deletes_vertices():
    # center with many pendant triangles; the modulator touches two of them fully
    d = 7
    edges = []
    verts = [1]
    vid = 2
    tris = []
    for _ in range(d):
        a, b, c = vid, vid + 1, vid + 2
        vid += 3
        verts += [a, b, c]
        tris.append((a, b, c))
        edges += [(1, a), (a, b), (a, c), (b, c)]
    x = vid
    verts.append(x)
    for (a, b, c) in tris[:2]:
        edges += [(x, a), (x, b), (x, c)]
    inst = Instance(Graph.from_edges(verts, edges), frozenset({x}), 5, 2)
    tree = tree_of(inst.graph, [1] + [t[0] for t in tris], [(1, t[0]) for t in tris])
    got = meta_rule_3(inst, tree)
    assert got is not None
    out, event = got
    assert out.graph.n < inst.graph.n
    assert out.modulator == inst.modulator
    assert verify_equivalence(inst, out)


def test_meta_rules_keep_equivalence_on_random_instances(rng):
    # any meta-rule application preserves the answer for the swept k
    done = 0
    while done < 40:
        c = rng.choice([1, 2])
        g, xs = random_modulator_instance(rng, c, max_v=14)
        if not is_bd_at_most(g.induced(g.vertex_set() - xs), c):
            continue
        done += 1
        for k in (0, g.n // 2, g.n):
            inst = Instance(g, xs, k, c)
            out, _ = kernelize(inst, checked=True)
            assert verify_equivalence(inst, out)


# ---------------------------------------------------------------------------
# the full pipeline
# ---------------------------------------------------------------------------


def test_kernelize_c0_returns_input_unchanged():
    g = make_graph(3, [(1, 2), (2, 3), (1, 3)])
    inst = Instance(g, g.vertex_set(), 1, 0)
    out, trace = kernelize(inst)
    assert out.graph == g and out.k == 1
    assert [e["rule"] for e in trace.events] == ["start"]


def test_kernelize_free_triangle_then_trivial():
    inst = inst_of(4, [(1, 2), (2, 3), (1, 3)], {4}, 2, 2)
    out, trace = kernelize(inst)
    rules = [e["rule"] for e in trace.events]
    assert rules[1] == "free"
    assert verify_equivalence(inst, out)


def test_kernelize_negative_k_short_circuits():
    inst = inst_of(4, [(1, 2), (2, 3), (1, 3)], {4}, 1, 2)
    out, trace = kernelize(inst)
    # free rule pays alpha = 1, k reaches 0; still fine. Force negative:
    inst2 = inst_of(4, [(1, 2), (2, 3), (1, 3)], {4}, 0, 2)
    out2, trace2 = kernelize(inst2)
    assert verify_equivalence(inst2, out2)
    deep = inst_of(7, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)], {7}, 1, 2)
    out3, trace3 = kernelize(deep)
    rules = [e["rule"] for e in trace3.events]
    assert "negative_k_shortcut" in rules
    assert out3.graph.n == 1 and out3.k == 0
    assert verify_equivalence(deep, out3)


def test_kernelize_final_modulator_is_whole_graph():
    inst = inst_of(5, [(1, 2), (2, 3), (3, 4)], {5}, 2, 1)
    out, _ = kernelize(inst)
    assert out.modulator == out.graph.vertex_set()
    assert out.c == 0


def test_kernelize_trace_is_deterministic():
    inst = inst_of(6, [(1, 2), (2, 3), (3, 4), (4, 5), (6, 1), (6, 5)], {6}, 2, 1)
    a = kernelize(inst)[1].to_json_lines()
    b = kernelize(inst)[1].to_json_lines()
    assert a == b


def test_verify_equivalence_identical():
    inst = inst_of(2, [(1, 2)], {1}, 1, 1)
    assert verify_equivalence(inst, inst)


def test_verify_equivalence_detects_k_shift():
    g = make_graph(2, [(1, 2)])
    a = Instance(g, frozenset({1}), 1, 1)
    b = Instance(g, frozenset({1}), 2, 1)
    assert not verify_equivalence(a, b)


def test_trace_replay_reproduces_output(rng):
    done = 0
    while done < 30:
        c = rng.choice([1, 2])
        g, xs = random_modulator_instance(rng, c, max_v=14)
        if not is_bd_at_most(g.induced(g.vertex_set() - xs), c):
            continue
        done += 1
        inst = Instance(g, xs, g.n // 2, c)
        out, trace = kernelize(inst)
        assert replay_trace(inst, trace) == out


def test_trace_replay_detects_mutation():
    # k sits exactly at alpha, so shifting one dk flips the answer
    deep = inst_of(7, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)], {7}, 3, 2)
    assert alpha_value(deep.graph) == deep.k
    out, trace = kernelize(deep)
    mutated = [dict(e) for e in trace.events]
    for ev in mutated:
        if ev["rule"] == "free":
            ev["dk"] += 1
            break
    replayed = replay_trace(deep, mutated)
    assert not verify_equivalence(deep, replayed)


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------


def test_instance_file_roundtrip():
    inst = inst_of(3, [(1, 2)], {3}, 2, 1)
    text = dump_instance(inst)
    back = load_instance(text)
    assert back == inst
    assert dump_instance(back) == text


def test_instance_file_flag_overrides():
    text = "p 2 1\ne 1 2\nx 1\nk 1\nc 1\n"
    assert load_instance(text, k=0).k == 0
    assert load_instance(text, c=2).c == 2


def test_instance_file_requires_k_and_c():
    with pytest.raises(ValueError):
        load_instance("p 1 0\nx 1\nc 1\n")
    with pytest.raises(ValueError):
        load_instance("p 1 0\nx 1\nk 1\n")


def test_instance_file_rejects_unknown_records():
    from bridgekit.errors import GraphFormatError

    with pytest.raises(GraphFormatError):
        load_instance("p 1 0\nz 1\nk 1\nc 1\n")
