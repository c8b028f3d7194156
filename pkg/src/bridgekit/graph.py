"""Simple undirected graphs with stable integer vertex ids.

Graphs are value-like: every mutating operation returns a new graph. Vertex
identities survive deletions; identifications mint a fresh id and record which
original vertices it represents (the provenance map), so reduction traces can
be replayed against the original input.

All iteration is in ascending id order, which pins down every tie-break.
"""

from __future__ import annotations

from collections import deque

from .errors import GraphFormatError, InternalInconsistencyError


class Graph:
    """Immutable simple graph: no self-loops, no parallel edges."""

    __slots__ = ("_adj", "_prov", "_key")

    def __init__(self, adj, prov):
        # Takes ownership of both dicts; values must be frozensets.
        self._adj = adj
        self._prov = prov
        self._key = None

    @classmethod
    def from_edges(cls, vertices, edges, provenance=None):
        adj = {int(v): set() for v in vertices}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u},{v}) has an endpoint outside the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        adj = {v: frozenset(ns) for v, ns in adj.items()}
        if provenance is None:
            prov = {v: frozenset((v,)) for v in adj}
        else:
            prov = {v: frozenset(provenance[v]) for v in adj}
        return cls(adj, prov)

    @classmethod
    def empty(cls):
        return cls({}, {})

    @property
    def n(self):
        return len(self._adj)

    @property
    def m(self):
        return sum(len(ns) for ns in self._adj.values()) // 2

    def vertices(self):
        return sorted(self._adj)

    def vertex_set(self):
        return frozenset(self._adj)

    def edges(self):
        out = []
        for v in sorted(self._adj):
            for w in self._adj[v]:
                if v < w:
                    out.append((v, w))
        out.sort()
        return out

    def edge_set(self):
        return frozenset(self.edges())

    def neighbors(self, v):
        try:
            return self._adj[v]
        except KeyError:
            raise ValueError(f"unknown vertex id {v}") from None

    def closed_neighborhood(self, v):
        return self.neighbors(v) | {v}

    def degree(self, v):
        return len(self.neighbors(v))

    def has_vertex(self, v):
        return v in self._adj

    def has_edge(self, u, v):
        return u in self._adj and v in self._adj[u]

    def provenance(self, v):
        try:
            return self._prov[v]
        except KeyError:
            raise ValueError(f"unknown vertex id {v}") from None

    def provenance_map(self):
        return dict(self._prov)

    def cache_key(self):
        """Exact value key (not isomorphism-invariant); safe for memo tables."""
        if self._key is None:
            self._key = (tuple(sorted(self._adj)), tuple(self.edges()))
        return self._key

    def induced(self, vs):
        vs = frozenset(vs)
        unknown = vs - self._adj.keys()
        if unknown:
            raise ValueError(f"unknown vertex ids {sorted(unknown)}")
        adj = {v: self._adj[v] & vs for v in vs}
        prov = {v: self._prov[v] for v in vs}
        return Graph(adj, prov)

    def delete_vertices(self, s):
        s = frozenset(s)
        unknown = s - self._adj.keys()
        if unknown:
            raise ValueError(f"unknown vertex ids {sorted(unknown)}")
        return self.induced(self._adj.keys() - s)

    def delete_edges(self, f):
        pairs = set()
        for u, v in f:
            if not self.has_edge(u, v):
                raise ValueError(f"unknown edge ({u},{v})")
            pairs.add((min(u, v), max(u, v)))
        adj = {v: set(ns) for v, ns in self._adj.items()}
        for u, v in pairs:
            adj[u].discard(v)
            adj[v].discard(u)
        return Graph({v: frozenset(ns) for v, ns in adj.items()}, dict(self._prov))

    def fresh_id(self):
        top = 0
        for v in self._adj:
            if v > top:
                top = v
        for ids in self._prov.values():
            for v in ids:
                if v > top:
                    top = v
        return top + 1

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj and self._prov == other._prov

    def __hash__(self):
        return hash(self.cache_key())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def connected_components(g):
    """Partition of the vertices into maximal connected sets, ordered by smallest member id."""
    seen = set()
    comps = []
    for root in g.vertices():
        if root in seen:
            continue
        comp = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_connected(g):
    return len(connected_components(g)) <= 1


def is_tree(g):
    return g.n >= 1 and is_connected(g) and g.m == g.n - 1


def find_bridges(g):
    """Exactly the edges whose removal increases the component count (lowpoint DFS)."""
    disc = {}
    low = {}
    bridges = set()
    timer = 0
    for root in g.vertices():
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, None, iter(sorted(g.neighbors(root))))]
        while stack:
            v, parent, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if low[v] > disc[p]:
                        bridges.add((min(p, v), max(p, v)))
            elif w == parent:
                # simple graph: the back-reference to the parent occurs exactly once
                continue
            elif w in disc:
                if disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                disc[w] = low[w] = timer
                timer += 1
                stack.append((w, v, iter(sorted(g.neighbors(w)))))
    return frozenset(bridges)


def maximal_trees_of_bridges(g):
    """Vertex blocks of the inclusion-maximal trees of bridges, ordered by smallest member id.

    Blocks are the connected components of (V, bridges); singleton blocks are
    the vertices touching no bridge. Each block induces a tree in g.
    """
    bridges = find_bridges(g)
    badj = {v: set() for v in g.vertices()}
    for u, v in bridges:
        badj[u].add(v)
        badj[v].add(u)
    seen = set()
    blocks = []
    for root in g.vertices():
        if root in seen:
            continue
        comp = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in badj[x]:
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        blocks.append(frozenset(comp))
    return blocks


def contract_all_bridges(g):
    """Contract every maximal tree of bridges into a single vertex.

    Returns (bridgeless graph, mapping old-id -> new-id). Contracting whole
    blocks at once makes the result independent of any edge ordering.
    Singleton blocks keep their id; larger blocks get fresh ids in block order.
    """
    blocks = maximal_trees_of_bridges(g)
    mapping = {}
    next_id = g.fresh_id()
    prov = {}
    for block in blocks:
        if len(block) == 1:
            (v,) = block
            mapping[v] = v
            prov[v] = g.provenance(v)
        else:
            w = next_id
            next_id += 1
            merged = frozenset()
            for v in sorted(block):
                mapping[v] = w
                merged |= g.provenance(v)
            prov[w] = merged
    adj = {w: set() for w in prov}
    for u, v in g.edges():
        a, b = mapping[u], mapping[v]
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    out = Graph({v: frozenset(ns) for v, ns in adj.items()}, prov)
    return out, mapping


def identify_vertices(g, u, v):
    """Replace u and v by a fresh vertex adjacent to N({u,v}); no loop even if u,v were adjacent."""
    if u == v:
        raise ValueError("cannot identify a vertex with itself")
    if not g.has_vertex(u) or not g.has_vertex(v):
        raise ValueError(f"unknown vertex id {u if not g.has_vertex(u) else v}")
    w = g.fresh_id()
    nbrs = (g.neighbors(u) | g.neighbors(v)) - {u, v}
    adj = {x: set(ns) for x, ns in g._adj.items() if x not in (u, v)}
    for x in adj:
        adj[x].discard(u)
        adj[x].discard(v)
    adj[w] = set(nbrs)
    for x in nbrs:
        adj[x].add(w)
    prov = {x: p for x, p in g._prov.items() if x not in (u, v)}
    prov[w] = g.provenance(u) | g.provenance(v)
    return Graph({x: frozenset(ns) for x, ns in adj.items()}, prov), w


def delete_vertices(g, s):
    return g.delete_vertices(s)


def delete_edges(g, f):
    return g.delete_edges(f)


def bipartition(g):
    """2-coloring as (A, B) with each component's smallest id in A, or None if not bipartite."""
    color = {}
    for root in g.vertices():
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                if w not in color:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    a = frozenset(v for v, c in color.items() if c == 0)
    b = frozenset(v for v, c in color.items() if c == 1)
    return a, b


def is_bipartite(g):
    return bipartition(g) is not None


def _bfs_tree(g, root):
    dist = {root: 0}
    parent = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in sorted(g.neighbors(v)):
            if w not in dist:
                dist[w] = dist[v] + 1
                parent[w] = v
                queue.append(w)
    return dist, parent


def tree_longest_path(t):
    """A diameter path of the tree t, as an ordered vertex sequence.

    Ties: lexicographically smallest endpoint pair; the path between two tree
    vertices is unique, so no further choice remains. Runs from the smaller
    endpoint to the larger.
    """
    if not is_tree(t):
        raise ValueError("input is not a tree")
    vs = t.vertices()
    if len(vs) == 1:
        return [vs[0]]
    best_len = -1
    best_pair = None
    dists = {}
    for u in vs:
        dist, _ = _bfs_tree(t, u)
        dists[u] = dist
        for v in vs:
            d = dist[v]
            if d > best_len:
                best_len = d
                best_pair = (min(u, v), max(u, v))
            elif d == best_len and (min(u, v), max(u, v)) < best_pair:
                best_pair = (min(u, v), max(u, v))
    a, b = best_pair
    _, parent = _bfs_tree(t, a)
    path = [b]
    while path[-1] != a:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def tree_diameter(t):
    """Diameter of a tree in edges."""
    return len(tree_longest_path(t)) - 1


def path_graph_of(g, path):
    """Subgraph of g consisting of the given vertex sequence and its consecutive edges."""
    edges = list(zip(path, path[1:]))
    for u, v in edges:
        if not g.has_edge(u, v):
            raise InternalInconsistencyError(f"path edge ({u},{v}) missing from graph")
    prov = {v: g.provenance(v) for v in path}
    return Graph.from_edges(path, edges, provenance=prov)


# ---------------------------------------------------------------------------
# File format
#
#   # comment
#   p <n> <m>        header: n vertices (ids 1..n), m edges
#   v <id>           optional, documents isolated vertices
#   e <u> <v>        one edge, 1-based ids <= n
# ---------------------------------------------------------------------------


def _parse_records(text, allowed):
    header = None
    edges = []
    extra = {"x": [], "k": None, "c": None}
    seen_edges = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind not in allowed:
            raise GraphFormatError(line_no, f"unknown record type {kind!r}")
        if kind == "p":
            if header is not None:
                raise GraphFormatError(line_no, "duplicate header")
            if len(parts) != 3:
                raise GraphFormatError(line_no, "header must be 'p <n> <m>'")
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(line_no, "header counts must be integers") from None
            if n < 0 or m < 0:
                raise GraphFormatError(line_no, "header counts must be non-negative")
            header = (n, m)
            continue
        if header is None:
            raise GraphFormatError(line_no, "record before 'p' header")
        n = header[0]
        if kind == "v":
            if len(parts) != 2:
                raise GraphFormatError(line_no, "vertex line must be 'v <id>'")
            try:
                v = int(parts[1])
            except ValueError:
                raise GraphFormatError(line_no, "vertex id must be an integer") from None
            if not 1 <= v <= n:
                raise GraphFormatError(line_no, f"vertex id {v} out of range 1..{n}")
        elif kind == "e":
            if len(parts) != 3:
                raise GraphFormatError(line_no, "edge line must be 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(line_no, "edge endpoints must be integers") from None
            if u == v:
                raise GraphFormatError(line_no, f"self-loop at vertex {u}")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphFormatError(line_no, f"vertex id {x} out of range 1..{n}")
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise GraphFormatError(line_no, f"duplicate edge ({u},{v})")
            seen_edges.add(key)
            edges.append(key)
        elif kind == "x":
            if len(parts) != 2:
                raise GraphFormatError(line_no, "modulator line must be 'x <id>'")
            try:
                v = int(parts[1])
            except ValueError:
                raise GraphFormatError(line_no, "modulator id must be an integer") from None
            if not 1 <= v <= n:
                raise GraphFormatError(line_no, f"modulator id {v} out of range 1..{n}")
            if v in extra["x"]:
                raise GraphFormatError(line_no, f"duplicate modulator vertex {v}")
            extra["x"].append(v)
        elif kind in ("k", "c"):
            if len(parts) != 2:
                raise GraphFormatError(line_no, f"'{kind}' line must be '{kind} <int>'")
            if extra[kind] is not None:
                raise GraphFormatError(line_no, f"duplicate '{kind}' record")
            try:
                extra[kind] = int(parts[1])
            except ValueError:
                raise GraphFormatError(line_no, f"'{kind}' value must be an integer") from None
    if header is None:
        raise GraphFormatError(0, "missing 'p <n> <m>' header")
    n, m = header
    if len(edges) != m:
        raise GraphFormatError(0, f"header declares {m} edges but file has {len(edges)}")
    return n, edges, extra


def load_graph(text):
    n, edges, _ = _parse_records(text, allowed=("p", "v", "e"))
    return Graph.from_edges(range(1, n + 1), edges)


def relabel_canonical(g):
    """Relabel vertices ascending to 1..n. Returns (graph, mapping old->new)."""
    mapping = {v: i for i, v in enumerate(g.vertices(), start=1)}
    edges = [(mapping[u], mapping[v]) for u, v in g.edges()]
    out = Graph.from_edges(range(1, g.n + 1), edges)
    return out, mapping


def dump_graph(g):
    """Canonical text form. Relabels to 1..n when ids are not already exactly that."""
    if g.vertices() != list(range(1, g.n + 1)):
        g, _ = relabel_canonical(g)
    lines = [f"p {g.n} {g.m}"]
    for v in g.vertices():
        if g.degree(v) == 0:
            lines.append(f"v {v}")
    for u, v in g.edges():
        lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"
