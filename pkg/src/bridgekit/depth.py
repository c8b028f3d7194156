"""Bridge-depth, lowering trees, and the comparison parameters tree-depth, treewidth, fvs.

bridge_depth follows the recursive definition directly: contract all bridges,
then 1 + min over single-vertex deletions; disconnected graphs take the max
over components. bridge_depth_via_trees minimizes over maximal trees of
bridges instead, which is equivalent; a test asserts they agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import CapExceededError, InternalInconsistencyError
from .graph import (
    Graph,
    connected_components,
    contract_all_bridges,
    find_bridges,
    is_connected,
    maximal_trees_of_bridges,
)

# bridge contraction collapses most structure, so bd tolerates more vertices
# than the subset-DP parameters do
DEFAULT_DEPTH_CAP = 24
DEFAULT_PARAM_CAP = 14

_BD_MEMO = {}
_BD_AT_MOST_MEMO = {}


def clear_caches():
    _BD_MEMO.clear()
    _BD_AT_MOST_MEMO.clear()


def _norm_key(g):
    # Order-preserving relabel to 0..n-1; collapses graphs equal up to id shifts.
    ids = g.vertices()
    index = {v: i for i, v in enumerate(ids)}
    return (len(ids), tuple((index[u], index[v]) for u, v in g.edges()))


def _check_cap(g, cap, what):
    if g.n > cap:
        raise CapExceededError(f"{what} asked on {g.n} vertices, cap is {cap}")


def bridge_depth(g, cap=DEFAULT_DEPTH_CAP):
    """Exact bridge-depth: 0 for the empty graph, max over components, else
    1 + min over vertices of the bridge-contracted graph."""
    _check_cap(g, cap, "bridge_depth")
    return _bd(g)


def _bd(g):
    if g.n == 0:
        return 0
    comps = connected_components(g)
    if len(comps) > 1:
        return max(_bd(g.induced(c)) for c in comps)
    key = _norm_key(g)
    cached = _BD_MEMO.get(key)
    if cached is not None:
        return cached
    gbar, _ = contract_all_bridges(g)
    if gbar.n == 1:
        res = 1
    else:
        res = 1 + min(_bd(gbar.delete_vertices({v})) for v in gbar.vertices())
    _BD_MEMO[key] = res
    return res


def bridge_depth_via_trees(g, cap=DEFAULT_DEPTH_CAP):
    """Equivalent recursion minimizing over maximal trees of bridges."""
    _check_cap(g, cap, "bridge_depth_via_trees")

    def rec(h):
        if h.n == 0:
            return 0
        comps = connected_components(h)
        if len(comps) > 1:
            return max(rec(h.induced(c)) for c in comps)
        if h.n == 1:
            return 1
        return 1 + min(rec(h.delete_vertices(block)) for block in maximal_trees_of_bridges(h))

    return rec(g)


def is_bd_at_most(g, c):
    """Thresholded recursion with early cutoff; no size cap."""
    if c < 0:
        return False
    if g.n == 0:
        return True
    comps = connected_components(g)
    if len(comps) > 1:
        return all(is_bd_at_most(g.induced(comp), c) for comp in comps)
    if c == 0:
        return False
    key = (_norm_key(g), c)
    cached = _BD_AT_MOST_MEMO.get(key)
    if cached is not None:
        return cached
    gbar, _ = contract_all_bridges(g)
    if gbar.n == 1:
        res = True
    else:
        res = any(is_bd_at_most(gbar.delete_vertices({v}), c - 1) for v in gbar.vertices())
    _BD_AT_MOST_MEMO[key] = res
    return res


@dataclass(frozen=True)
class LoweringTree:
    tree: Graph
    certified_bd_before: int
    certified_bd_after: int


def lowering_tree(g, cap=DEFAULT_DEPTH_CAP):
    """First maximal tree of bridges (ascending smallest-id order) whose removal lowers bd."""
    if g.n == 0:
        raise ValueError("lowering tree of the empty graph is undefined")
    if not is_connected(g):
        raise ValueError("lowering tree requires a connected graph")
    _check_cap(g, cap, "lowering_tree")
    d = _bd(g)
    bridges = find_bridges(g)
    for block in maximal_trees_of_bridges(g):
        if _bd(g.delete_vertices(block)) == d - 1:
            edges = [e for e in bridges if e[0] in block and e[1] in block]
            tree = Graph.from_edges(
                block, edges, provenance={v: g.provenance(v) for v in block}
            )
            return LoweringTree(tree, d, d - 1)
    raise InternalInconsistencyError("no maximal tree of bridges lowers the bridge-depth")


def tree_depth(g, cap=DEFAULT_PARAM_CAP):
    _check_cap(g, cap, "tree_depth")
    if g.n == 0:
        return 0
    return max(_td_component(g.induced(c)) for c in connected_components(g))


def _td_component(g):
    ids = g.vertices()
    index = {v: i for i, v in enumerate(ids)}
    adj = [0] * len(ids)
    for u, v in g.edges():
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    memo = {0: 0}

    def flood(mask, start):
        comp = 1 << start
        frontier = comp
        while frontier:
            grow = 0
            m = frontier
            while m:
                low = m & -m
                m ^= low
                grow |= adj[low.bit_length() - 1]
            frontier = grow & mask & ~comp
            comp |= frontier
        return comp

    def td(mask):
        cached = memo.get(mask)
        if cached is not None:
            return cached
        comp = flood(mask, (mask & -mask).bit_length() - 1)
        if comp != mask:
            res = max(td(comp), td(mask ^ comp))
        elif mask & (mask - 1) == 0:
            res = 1
        else:
            res = 1 + min(td(mask ^ low) for low in _low_bits(mask))
        memo[mask] = res
        return res

    return td((1 << len(ids)) - 1)


def _low_bits(mask):
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def treewidth(g, cap=DEFAULT_PARAM_CAP):
    """Exact treewidth by elimination-order DP over vertex subsets; -1 for the empty graph."""
    _check_cap(g, cap, "treewidth")
    if g.n == 0:
        return -1
    return max(_tw_component(g.induced(c)) for c in connected_components(g))


def _tw_component(g):
    ids = g.vertices()
    n = len(ids)
    index = {v: i for i, v in enumerate(ids)}
    adj = [0] * n
    for u, v in g.edges():
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    full = (1 << n) - 1

    def q(s, i):
        # vertices outside s+{i} seen from i through interior s
        region = 1 << i
        frontier = region
        boundary = 0
        allowed = s
        while frontier:
            grow = 0
            m = frontier
            while m:
                low = m & -m
                m ^= low
                grow |= adj[low.bit_length() - 1]
            boundary |= grow & ~allowed & ~region
            frontier = grow & allowed & ~region
            region |= frontier
        return (boundary & ~(1 << i)).bit_count()

    f = {0: -1}
    for size in range(1, n + 1):
        for combo in combinations(range(n), size):
            s = 0
            for i in combo:
                s |= 1 << i
            best = None
            for i in combo:
                rest = s ^ (1 << i)
                val = max(f[rest], q(rest, i))
                if best is None or val < best:
                    best = val
            f[s] = best
    return f[full]


def fvs_number(g, cap=DEFAULT_PARAM_CAP):
    """Minimum number of vertex deletions leaving a forest; ascending-size subset search."""
    _check_cap(g, cap, "fvs_number")

    def is_forest(h):
        return h.m == h.n - len(connected_components(h))

    if is_forest(g):
        return 0
    vs = g.vertices()
    for size in range(1, g.n + 1):
        for combo in combinations(vs, size):
            if is_forest(g.delete_vertices(combo)):
                return size
    raise InternalInconsistencyError("deleting all vertices must leave a forest")


def min_bd_modulator(g, c, cap=DEFAULT_PARAM_CAP):
    """Lexicographically least minimum-size X with bd(G minus X) <= c."""
    _check_cap(g, cap, "min_bd_modulator")
    vs = g.vertices()
    for size in range(0, g.n + 1):
        for combo in combinations(vs, size):
            if is_bd_at_most(g.delete_vertices(combo), c):
                return frozenset(combo)
    raise InternalInconsistencyError("the full vertex set is always a modulator")
