"""Exact independence numbers, maximum independent sets, conflicts, and bipartite matching.

The solver is branch-and-reduce over bitmasks: split connected components,
take degree-0/1 vertices, otherwise branch on a maximum-degree vertex.
Results are cached per graph value so repeated queries (the kernelizer asks
for the same subgraphs over and over) are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import CapExceededError
from .graph import Graph

DEFAULT_ALPHA_CAP = 64

_SOLVERS = {}


def clear_caches():
    _SOLVERS.clear()


class _Solver:
    def __init__(self, g: Graph):
        self.ids = g.vertices()
        self.index = {v: i for i, v in enumerate(self.ids)}
        self.adj = [0] * len(self.ids)
        for u, v in g.edges():
            iu, iv = self.index[u], self.index[v]
            self.adj[iu] |= 1 << iv
            self.adj[iv] |= 1 << iu
        self.closed = [a | (1 << i) for i, a in enumerate(self.adj)]
        self.full = (1 << len(self.ids)) - 1
        self.memo = {}

    def mask_of(self, vertices):
        m = 0
        for v in vertices:
            m |= 1 << self.index[v]
        return m

    def ids_of(self, mask):
        return frozenset(self.ids[i] for i in _bits(mask))

    def alpha(self, mask):
        if mask == 0:
            return 0
        cached = self.memo.get(mask)
        if cached is not None:
            return cached
        lowest = (mask & -mask).bit_length() - 1
        comp = self._flood(mask, lowest)
        if comp != mask:
            res = self.alpha(comp) + self.alpha(mask ^ comp)
            self.memo[mask] = res
            return res
        if comp & (comp - 1) == 0:
            self.memo[mask] = 1
            return 1
        best_v = -1
        best_d = -1
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            d = (self.adj[i] & mask).bit_count()
            if d == 1:
                res = 1 + self.alpha(mask & ~self.closed[i])
                self.memo[mask] = res
                return res
            if d > best_d:
                best_d = d
                best_v = i
        res = max(
            1 + self.alpha(mask & ~self.closed[best_v]),
            self.alpha(mask & ~(1 << best_v)),
        )
        self.memo[mask] = res
        return res

    def _flood(self, mask, start):
        comp = 1 << start
        frontier = comp
        while frontier:
            grow = 0
            m = frontier
            while m:
                low = m & -m
                m ^= low
                grow |= self.adj[low.bit_length() - 1]
            frontier = grow & mask & ~comp
            comp |= frontier
        return comp

    def least_witness(self, mask):
        """Lexicographically least maximum independent set within mask (as a mask)."""
        chosen = 0
        while mask:
            target = self.alpha(mask)
            if target == 0:
                break
            m = mask
            while m:
                low = m & -m
                i = low.bit_length() - 1
                m ^= low
                rest = mask & ~self.closed[i]
                if 1 + self.alpha(rest) == target:
                    chosen |= low
                    mask = rest
                    break
        return chosen

    def max_independent_sets(self, mask, target):
        """All independent sets of the given size inside mask, each exactly once."""
        if target == 0:
            yield 0
            return
        if self.alpha(mask) < target:
            return
        low = mask & -mask
        i = low.bit_length() - 1
        for rest in self.max_independent_sets(mask & ~self.closed[i], target - 1):
            yield rest | low
        yield from self.max_independent_sets(mask ^ low, target)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def get_solver(g: Graph) -> _Solver:
    key = g.cache_key()
    solver = _SOLVERS.get(key)
    if solver is None:
        solver = _Solver(g)
        _SOLVERS[key] = solver
    return solver


def _check_cap(g, cap):
    if g.n > cap:
        raise CapExceededError(f"graph has {g.n} vertices, exceeding the cap of {cap}")


@dataclass(frozen=True)
class MISResult:
    alpha: int
    witness: frozenset


def alpha_value(g, cap=DEFAULT_ALPHA_CAP):
    _check_cap(g, cap)
    solver = get_solver(g)
    return solver.alpha(solver.full)


def alpha(g, cap=DEFAULT_ALPHA_CAP):
    """Exact independence number with the lexicographically least optimal witness."""
    _check_cap(g, cap)
    solver = get_solver(g)
    value = solver.alpha(solver.full)
    witness = solver.ids_of(solver.least_witness(solver.full))
    return MISResult(value, witness)


def alpha_naive(g, cap=20):
    """Powerset enumeration; the independent oracle alpha is checked against."""
    _check_cap(g, cap)
    ids = g.vertices()
    index = {v: i for i, v in enumerate(ids)}
    adj = [0] * len(ids)
    for u, v in g.edges():
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    best = 0
    independent = [False] * (1 << len(ids))
    independent[0] = True
    for mask in range(1, 1 << len(ids)):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        independent[mask] = independent[rest] and (adj[i] & rest) == 0
        if independent[mask]:
            c = mask.bit_count()
            if c > best:
                best = c
    return best


def maximum_independent_sets(g, cap=DEFAULT_ALPHA_CAP):
    """All maximum independent sets, deterministic order."""
    _check_cap(g, cap)
    solver = get_solver(g)
    target = solver.alpha(solver.full)
    return [solver.ids_of(m) for m in solver.max_independent_sets(solver.full, target)]


def open_neighborhood(g, xs):
    out = set()
    for v in xs:
        out |= g.neighbors(v)
    return frozenset(out - frozenset(xs))


def conf(g, rp, xp, cap=DEFAULT_ALPHA_CAP):
    """Independence loss on rp when the vertices of xp are selected.

    conf = alpha(G[rp]) - alpha(G[rp minus N(xp)]); always non-negative.
    """
    rp = frozenset(rp)
    xp = frozenset(xp)
    if rp & xp:
        raise ValueError(f"overlapping sets: {sorted(rp & xp)}")
    sub = g.induced(rp)
    _check_cap(sub, cap)
    solver = get_solver(sub)
    before = solver.alpha(solver.full)
    avoid = solver.mask_of(open_neighborhood(g, xp) & rp)
    after = solver.alpha(solver.full & ~avoid)
    return before - after


def alpha_additive_check(g, parts, cap=DEFAULT_ALPHA_CAP):
    """True iff alpha(g) equals the sum of the parts' independence numbers."""
    union = set()
    total = 0
    for p in parts:
        p = frozenset(p)
        if union & p:
            raise ValueError("blocks overlap")
        union |= p
    if union != g.vertex_set():
        raise ValueError("blocks do not cover the vertex set")
    for p in parts:
        total += alpha_value(g.induced(p), cap=cap)
    return total == alpha_value(g, cap=cap)


@dataclass(frozen=True)
class Matching:
    edges: frozenset

    @cached_property
    def saturated(self):
        out = set()
        for u, v in self.edges:
            out.add(u)
            out.add(v)
        return frozenset(out)

    def partner(self, v):
        for a, b in self.edges:
            if a == v:
                return b
            if b == v:
                return a
        return None

    def partner_map(self):
        out = {}
        for a, b in self.edges:
            out[a] = b
            out[b] = a
        return out

    def __len__(self):
        return len(self.edges)


def _check_bipartition(g, a, b):
    a = frozenset(a)
    b = frozenset(b)
    if a & b:
        raise ValueError("partite sets overlap")
    if a | b != g.vertex_set():
        raise ValueError("partite sets do not cover the vertex set")
    for u, v in g.edges():
        if (u in a) == (v in a):
            raise ValueError(f"edge ({u},{v}) lies inside one partite set")
    return a, b


def bipartite_maximum_matching(g, a, b):
    """Maximum matching via augmenting paths, processing A-vertices in ascending order."""
    a, b = _check_bipartition(g, a, b)
    match = {}

    def try_augment(u, visited):
        for w in sorted(g.neighbors(u)):
            if w in visited:
                continue
            visited.add(w)
            if w not in match or try_augment(match[w], visited):
                match[w] = u
                return True
        return False

    for u in sorted(a):
        try_augment(u, set())
    edges = frozenset((min(u, w), max(u, w)) for w, u in match.items())
    return Matching(edges)


def alternating_reachability(g, a, b, matching, sources, start_with_matching_edge):
    """Vertices reachable by alternating paths: A->B over non-matching edges, B->A over matching.

    sources lie in A when the walk starts with a non-matching edge, in B when
    it starts with a matching edge.
    """
    a, b = _check_bipartition(g, a, b)
    sources = frozenset(sources)
    side = b if start_with_matching_edge else a
    if not sources <= side:
        raise ValueError("sources must lie in the partite set matching the start flag")
    partner = matching.partner_map()
    reach = set(sources)
    queue = sorted(sources)
    while queue:
        v = queue.pop()
        if v in a:
            for w in g.neighbors(v):
                if partner.get(v) != w and w not in reach:
                    reach.add(w)
                    queue.append(w)
        else:
            w = partner.get(v)
            if w is not None and w not in reach:
                reach.add(w)
                queue.append(w)
    return frozenset(reach)
