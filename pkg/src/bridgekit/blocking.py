"""Blocking sets: predicates, the exact mbs oracle, and two constructive shrinkers.

A blocking set Y has alpha(G minus Y) < alpha(G), i.e. it meets every maximum
independent set. mbs(G) is the largest size of an inclusion-minimal one.
shrink_blocking_set_bipartite realizes the matching-based case analysis that
shrinks any blocking set of a bipartite graph to size <= 2 (size-2 outputs
straddle the bipartition); shrink_blocking_set lifts it to general graphs by
recursing along a lowering tree through an auxiliary bipartite graph, giving
a blocking subset of size <= 2^bd(G).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import CapExceededError, InternalInconsistencyError
from .graph import Graph, bipartition, connected_components, find_bridges, is_connected, is_tree
from .depth import lowering_tree
from .independence import (
    alpha_value,
    alternating_reachability,
    bipartite_maximum_matching,
    get_solver,
    maximum_independent_sets,
    open_neighborhood,
)

DEFAULT_MBS_CAP = 24


@dataclass(frozen=True)
class BlockingCertificate:
    vertices: frozenset
    alpha_before: int
    alpha_after: int


def is_blocking_set(g, ys):
    """BlockingCertificate when alpha drops after deleting ys, else None."""
    ys = frozenset(ys)
    if not ys <= g.vertex_set():
        raise ValueError(f"blocking-set candidate leaves the graph: {sorted(ys - g.vertex_set())}")
    before = alpha_value(g)
    after = alpha_value(g.delete_vertices(ys))
    if after < before:
        return BlockingCertificate(ys, before, after)
    return None


def _minimal_transversals(universe, edge_sets):
    """Yield every inclusion-minimal hitting set of the hypergraph, each once.

    Classic branch-on-an-uncovered-edge enumeration: a vertex may join the
    partial solution only while every chosen vertex keeps a private edge.
    """
    index = {v: i for i, v in enumerate(universe)}
    vert_edges = [0] * len(universe)
    for j, es in enumerate(edge_sets):
        for v in es:
            vert_edges[index[v]] |= 1 << j
    all_edges = (1 << len(edge_sets)) - 1
    edge_members = [sorted(index[v] for v in es) for es in edge_sets]

    out = []

    def rec(chosen, crit, uncov, cand):
        if uncov == 0:
            out.append([universe[i] for i in chosen])
            return
        e = (uncov & -uncov).bit_length() - 1
        branch = [i for i in edge_members[e] if cand & (1 << i)]
        cand_left = cand
        for i in branch:
            cand_left &= ~(1 << i)
            new_crit = []
            ok = True
            for c in crit:
                c2 = c & ~vert_edges[i]
                if c2 == 0:
                    ok = False
                    break
                new_crit.append(c2)
            if not ok:
                continue
            new_crit.append(vert_edges[i] & uncov)
            rec(chosen + [i], new_crit, uncov & ~vert_edges[i], cand_left)

    rec([], [], all_edges, (1 << len(universe)) - 1)
    return out


def mbs_witness(g, cap=DEFAULT_MBS_CAP):
    """(mbs value, a largest minimal blocking set); (0, empty) for the empty graph.

    Minimal blocking sets are exactly the minimal transversals of the family
    of maximum independent sets, so we enumerate those.
    """
    if g.n > cap:
        raise CapExceededError(f"mbs on {g.n} vertices exceeds the cap of {cap}")
    if g.n == 0:
        return 0, frozenset()
    families = maximum_independent_sets(g)
    best = None
    for tr in _minimal_transversals(g.vertices(), families):
        if best is None or len(tr) > len(best):
            best = tr
    if best is None:
        raise InternalInconsistencyError("a nonempty graph always has a blocking set")
    return len(best), frozenset(best)


def mbs(g, cap=DEFAULT_MBS_CAP):
    return mbs_witness(g, cap=cap)[0]


def mbs_naive(g, cap=14):
    """Powerset oracle: filter blocking subsets, keep the inclusion-minimal, take max size."""
    if g.n > cap:
        raise CapExceededError(f"naive mbs on {g.n} vertices exceeds the cap of {cap}")
    if g.n == 0:
        return 0
    ids = g.vertices()
    base = alpha_value(g)
    blocking = set()
    for mask in range(1, 1 << len(ids)):
        ys = frozenset(ids[i] for i in range(len(ids)) if mask & (1 << i))
        if alpha_value(g.delete_vertices(ys)) < base:
            blocking.add(ys)
    best = 0
    for ys in blocking:
        if all(ys - {y} not in blocking for y in ys):
            best = max(best, len(ys))
    return best


def shrink_blocking_set_bipartite(g, a, b, ys):
    """Shrink a blocking set of a bipartite graph to one vertex, or two straddling ones.

    Follows the alternating-reachability case analysis on a maximum matching;
    size-1 answers are preferred and all witnesses are smallest-id.
    """
    ys = frozenset(ys)
    if is_blocking_set(g, ys) is None:
        raise ValueError("input set is not blocking")
    a = frozenset(a)
    b = frozenset(b)
    matching = bipartite_maximum_matching(g, a, b)
    unsaturated = g.vertex_set() - matching.saturated

    reach_from_unsat = alternating_reachability(
        g, a, b, matching, a & unsaturated, start_with_matching_edge=False
    )
    case1 = sorted(a & ys & reach_from_unsat)
    if case1:
        return frozenset({case1[0]})

    closures = {}
    for y in sorted(b & ys):
        closures[y] = alternating_reachability(
            g, a, b, matching, {y}, start_with_matching_edge=True
        )
    for y in sorted(closures):
        if closures[y] & (b & unsaturated):
            return frozenset({y})
    for y in sorted(closures):
        hits = sorted(closures[y] & (a & ys))
        if hits:
            return frozenset({hits[0], y})

    reach = reach_from_unsat | frozenset().union(*closures.values()) if closures else reach_from_unsat
    avoiding = (a & reach) | (b - reach)
    raise InternalInconsistencyError(
        f"no shrinking case fired; {sorted(avoiding)} would be a maximum independent "
        "set avoiding the blocking set"
    )


@dataclass(frozen=True)
class AuxBlock:
    root: int
    component: frozenset
    zplus: tuple
    zminus: tuple


@dataclass(frozen=True)
class AuxiliaryBipartite:
    graph: Graph
    y_h: frozenset
    part_a: frozenset
    part_b: frozenset
    blocks: tuple  # of AuxBlock, ordered by root id

    def block_of(self, h_vertex):
        for blk in self.blocks:
            if h_vertex in blk.zplus or h_vertex in blk.zminus:
                return blk
        raise ValueError(f"vertex {h_vertex} not in any block")


def _pendant_components(g, tree):
    """Components of g minus E(tree), each containing exactly one tree vertex (its root)."""
    stripped = g.delete_edges(tree.edges()) if tree.m else g
    comps = connected_components(stripped)
    by_root = {}
    tree_vs = tree.vertex_set()
    for comp in comps:
        roots = comp & tree_vs
        if len(roots) != 1:
            raise InternalInconsistencyError(
                f"component {sorted(comp)} holds {len(roots)} tree vertices"
            )
        (r,) = roots
        by_root[r] = comp
    if len(by_root) != tree.n:
        raise InternalInconsistencyError("tree vertices and pendant components do not biject")
    return by_root


def _validate_tree_of_bridges(g, tree):
    if not tree.vertex_set() <= g.vertex_set():
        raise ValueError("tree leaves the graph")
    if not is_tree(tree):
        raise ValueError("not a tree")
    bridges = find_bridges(g)
    for e in tree.edges():
        if e not in bridges:
            raise ValueError(f"tree edge {e} is not a bridge of the host graph")


def build_auxiliary_bipartite(g, tree, y_g):
    """Bipartite stand-in for independent-set choices along a tree of bridges.

    Every tree vertex t_i gets a clique-free twin class of size alpha(C_i)
    (pick t_i) joined completely to one of size alpha(C_i minus t_i) (skip
    t_i); twin classes of tree-adjacent roots are joined. The blocked part of
    y_g transfers as counts into the lowest-indexed twin vertices.
    """
    y_g = frozenset(y_g)
    if not is_connected(g) or g.n == 0:
        raise ValueError("host graph must be connected and nonempty")
    _validate_tree_of_bridges(g, tree)
    base = alpha_value(g)
    for v in g.vertices():
        if alpha_value(g.delete_vertices(g.closed_neighborhood(v))) + 1 != base:
            raise ValueError(f"vertex {v} lies in no maximum independent set")

    by_root = _pendant_components(g, tree)
    blocks = []
    y_h = set()
    next_id = 1
    for root in sorted(by_root):
        comp = by_root[root]
        cg = g.induced(comp)
        a_full = alpha_value(cg)
        a_avoid = alpha_value(cg.delete_vertices(comp & y_g))
        cg_no_root = cg.delete_vertices({root})
        a_noroot = alpha_value(cg_no_root)
        a_noroot_avoid = alpha_value(cg_no_root.delete_vertices((comp - {root}) & y_g))
        zplus = tuple(range(next_id, next_id + a_full))
        next_id += a_full
        zminus = tuple(range(next_id, next_id + a_noroot))
        next_id += a_noroot
        y_h.update(zplus[: a_full - a_avoid])
        y_h.update(zminus[: a_noroot - a_noroot_avoid])
        # the root is needed when alpha drops without it
        if a_full == a_noroot_avoid and a_full < a_avoid:
            raise InternalInconsistencyError("independence counts out of order")
        blocks.append(AuxBlock(root, comp, zplus, zminus))

    edges = []
    for blk in blocks:
        for p in blk.zplus:
            for mn in blk.zminus:
                edges.append((p, mn))
    idx = {blk.root: blk for blk in blocks}
    for u, v in tree.edges():
        for p in idx[u].zplus:
            for q in idx[v].zplus:
                edges.append((p, q))
    h = Graph.from_edges(range(1, next_id), edges)

    color = {}
    roots = sorted(by_root)
    queue = deque([roots[0]])
    color[roots[0]] = 0
    while queue:
        v = queue.popleft()
        for w in tree.neighbors(v):
            if w not in color:
                color[w] = 1 - color[v]
                queue.append(w)
    part_a, part_b = set(), set()
    for blk in blocks:
        plus_side = part_a if color[blk.root] == 0 else part_b
        minus_side = part_b if color[blk.root] == 0 else part_a
        plus_side.update(blk.zplus)
        minus_side.update(blk.zminus)

    aux = AuxiliaryBipartite(
        h, frozenset(y_h), frozenset(part_a), frozenset(part_b), tuple(blocks)
    )
    _assert_alpha_transfer(g, y_g, aux)
    _assert_root_forced(g, blocks)
    return aux


def _alpha_bipartite(h, part_a, part_b):
    # Koenig: independent route that does not share code with the solver
    matching = bipartite_maximum_matching(h, part_a, part_b)
    return h.n - len(matching)


def _assert_alpha_transfer(g, y_g, aux):
    h = aux.graph
    if _alpha_bipartite(h, aux.part_a, aux.part_b) != alpha_value(g):
        raise InternalInconsistencyError("auxiliary graph changed the independence number")
    h2 = h.delete_vertices(aux.y_h)
    a2 = _alpha_bipartite(h2, aux.part_a & h2.vertex_set(), aux.part_b & h2.vertex_set())
    if a2 != alpha_value(g.delete_vertices(y_g)):
        raise InternalInconsistencyError("auxiliary graph changed the blocked independence number")


def _assert_root_forced(g, blocks):
    for blk in blocks:
        cg = g.induced(blk.component)
        without = cg.delete_vertices(cg.closed_neighborhood(blk.root))
        if alpha_value(cg) != alpha_value(without) + 1:
            raise InternalInconsistencyError(
                f"root {blk.root} not in a maximum independent set of its pendant component"
            )


def shrink_blocking_set(g, ys, cap=None):
    """Blocking subset of ys of size at most 2^bd(G).

    Bipartite graphs delegate to the matching shrinker. Otherwise: pick a
    component where ys still blocks, drop vertices lying in no maximum
    independent set (repeating both to a fixpoint), then walk one lowering
    tree through the auxiliary bipartite graph and translate its <=2-vertex
    blocking set back, recursing into at most two pendant subgraphs.
    """
    ys = frozenset(ys)
    if is_blocking_set(g, ys) is None:
        raise ValueError("input set is not blocking")
    return _shrink(g, ys)


def _shrink(g, ys):
    while True:
        parts = bipartition(g)
        if parts is not None:
            out = shrink_blocking_set_bipartite(g, parts[0], parts[1], ys)
            _assert_blocking_subset(g, ys, out)
            return out

        comps = connected_components(g)
        if len(comps) > 1:
            for comp in comps:
                sub = g.induced(comp)
                if is_blocking_set(sub, ys & comp) is not None:
                    g, ys = sub, ys & comp
                    break
            else:
                raise InternalInconsistencyError(
                    "blocking set blocks no single component"
                )
            continue

        base = alpha_value(g)
        skippable = frozenset(
            v
            for v in g.vertices()
            if alpha_value(g.delete_vertices(g.closed_neighborhood(v))) + 1 != base
        )
        if skippable:
            # deleting them preserves the family of maximum independent sets
            g = g.delete_vertices(skippable)
            ys = ys - skippable
            if is_blocking_set(g, ys) is None:
                raise InternalInconsistencyError("strip phase broke the blocking set")
            continue

        lt = lowering_tree(g, cap=g.n)
        aux = build_auxiliary_bipartite(g, lt.tree, ys)
        y_h = shrink_blocking_set_bipartite(aux.graph, aux.part_a, aux.part_b, aux.y_h)
        out = set()
        for y in sorted(y_h):
            blk = aux.block_of(y)
            comp_graph = g.induced(blk.component)
            if y in blk.zplus:
                if blk.root in ys:
                    out.add(blk.root)
                else:
                    inner = comp_graph.delete_vertices(
                        comp_graph.closed_neighborhood(blk.root)
                    )
                    sub_y = ys & inner.vertex_set()
                    if is_blocking_set(inner, sub_y) is None:
                        raise InternalInconsistencyError(
                            "translated set fails to block the rootless pendant subgraph"
                        )
                    out |= _shrink(inner, sub_y)
            else:
                inner = comp_graph.delete_vertices({blk.root})
                sub_y = ys & inner.vertex_set()
                if is_blocking_set(inner, sub_y) is None:
                    raise InternalInconsistencyError(
                        "translated set fails to block the root-deleted component"
                    )
                out |= _shrink(inner, sub_y)
        out = frozenset(out)
        _assert_blocking_subset(g, ys, out)
        return out


def _assert_blocking_subset(g, ys, out):
    if not out <= ys:
        raise InternalInconsistencyError("shrunken set is not a subset of its input")
    if is_blocking_set(g, out) is None:
        raise InternalInconsistencyError("shrunken set is not blocking")
