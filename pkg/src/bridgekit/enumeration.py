"""Isomorph-free exhaustive generation of small graphs, plus seeded random generators.

all_graphs(n) extends every (n-1)-vertex graph by one vertex with every
possible neighborhood and dedups by canonical form. The canonical form is
min-over-orderings of the adjacency bitstring, where orderings are pruned by
iterated degree refinement with individualization, so only symmetric graphs
pay more than a handful of candidates. Known graph counts pin the generator
down in the tests.
"""

from __future__ import annotations

from functools import lru_cache

from .graph import Graph

# number of graphs / connected graphs on n unlabeled vertices, n = 0..8
KNOWN_GRAPH_COUNTS = [1, 1, 2, 4, 11, 34, 156, 1044, 12346]
KNOWN_CONNECTED_COUNTS = [1, 1, 1, 2, 6, 21, 112, 853, 11117]


def _refine(n, adj, colors):
    while True:
        sigs = []
        for v in range(n):
            neigh = []
            m = adj[v]
            while m:
                low = m & -m
                neigh.append(colors[low.bit_length() - 1])
                m ^= low
            neigh.sort()
            sigs.append((colors[v], tuple(neigh)))
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _edge_code(n, adj, order):
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    code = 0
    bit = 0
    for i in range(n):
        vi = order[i]
        for j in range(i + 1, n):
            if adj[vi] & (1 << order[j]):
                code |= 1 << bit
            bit += 1
    return code


def canonical_key(g: Graph):
    """Hashable form equal for isomorphic graphs of the same order."""
    ids = g.vertices()
    n = len(ids)
    if n == 0:
        return (0, 0)
    index = {v: i for i, v in enumerate(ids)}
    adj = [0] * n
    for u, v in g.edges():
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    return (n, _canon_code(n, adj))


def _canon_code(n, adj):
    best = None

    def search(colors):
        nonlocal best
        colors = _refine(n, adj, colors)
        groups = {}
        for v in range(n):
            groups.setdefault(colors[v], []).append(v)
        split = None
        for c in sorted(groups):
            if len(groups[c]) > 1:
                split = c
                break
        if split is None:
            order = sorted(range(n), key=lambda v: colors[v])
            code = _edge_code(n, adj, order)
            if best is None or code < best:
                best = code
            return
        for v in groups[split]:
            child = [2 * c + 1 for c in colors]
            child[v] = 2 * split
            search(child)

    search([0] * n)
    return best


@lru_cache(maxsize=None)
def all_graphs(n):
    """All graphs on exactly n vertices (ids 1..n), one per isomorphism class."""
    if n == 0:
        return (Graph.empty(),)
    out = []
    seen = set()
    for g in all_graphs(n - 1):
        base_edges = g.edges()
        for nb in range(1 << (n - 1)):
            edges = list(base_edges)
            for i in range(n - 1):
                if nb & (1 << i):
                    edges.append((i + 1, n))
            cand = Graph.from_edges(range(1, n + 1), edges)
            key = canonical_key(cand)
            if key not in seen:
                seen.add(key)
                out.append(cand)
    return tuple(out)


def all_graphs_up_to(n):
    out = []
    for i in range(n + 1):
        out.extend(all_graphs(i))
    return out


def connected_graphs(n):
    from .graph import is_connected

    return [g for g in all_graphs(n) if g.n > 0 and is_connected(g)]


# ---------------------------------------------------------------------------
# seeded random generators
# ---------------------------------------------------------------------------


def random_graph(rng, n, p):
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if rng.random() < p
    ]
    return Graph.from_edges(range(1, n + 1), edges)


def random_bipartite(rng, n_a, n_b, p):
    """Graph on 1..n_a+n_b with edges only across the split; returns (graph, A, B)."""
    a = list(range(1, n_a + 1))
    b = list(range(n_a + 1, n_a + n_b + 1))
    edges = [(u, v) for u in a for v in b if rng.random() < p]
    return Graph.from_edges(a + b, edges), frozenset(a), frozenset(b)


def random_tree_edges(rng, comp):
    edges = []
    for i, v in enumerate(comp[1:], start=1):
        edges.append((comp[rng.randrange(i)], v))
    return edges


def random_modulator_instance(rng, c, max_v=18, max_x=4):
    """Graph plus modulator whose remainder has bridge-depth <= c by construction.

    Remainder components are random trees; for c = 2 some gain one extra edge
    (one cycle per component keeps fvs <= 1, hence bd <= 2). The modulator gets
    random edges into the remainder and inside itself.
    """
    from .graph import Graph as _G

    vid = 1
    edges = []
    rverts = []
    n_x = rng.randint(0, max_x)
    budget = max_v - n_x
    n_comp = rng.randint(1, 3)
    for _ in range(n_comp):
        if budget <= 0:
            break
        size = rng.randint(1, min(9, budget))
        budget -= size
        comp = list(range(vid, vid + size))
        vid += size
        rverts += comp
        if rng.random() < 0.5:
            edges += random_tree_edges(rng, comp)
        else:
            edges += list(zip(comp, comp[1:]))
        if c >= 2 and size >= 3 and rng.random() < 0.6:
            u, v = sorted(rng.sample(comp, 2))
            if (u, v) not in edges:
                edges.append((u, v))
    xverts = list(range(vid, vid + n_x))
    for x in xverts:
        density = rng.choice([0.08, 0.2, 0.45])
        for r in rverts:
            if rng.random() < density:
                edges.append((x, r))
        for y in xverts:
            if y < x and rng.random() < 0.3:
                edges.append((y, x))
    return _G.from_edges(rverts + xverts, edges), frozenset(xverts)
