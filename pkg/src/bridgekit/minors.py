"""Necklace and triangle-path generators, brute-force minor-model search, packing numbers,
and the constructive necklace-to-triangle-path conversion.

A necklace of length t is the multigraph path on t+1 vertices with doubled
edges; a model needs at least two graph edges between consecutive branch
sets. Parallel-edge patterns exist only as multiplicity requirements on
branch-set pairs, never as multigraph data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceededError
from .graph import Graph

DEFAULT_MINOR_CAP = 10


@dataclass(frozen=True)
class NecklacePattern:
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("necklace length must be non-negative")

    def vertex_count(self):
        return self.length + 1


@dataclass(frozen=True)
class MinorModel:
    pattern: str  # "necklace" or "triangle_path"
    length: int
    branch_sets: tuple  # of frozensets, in pattern order


def make_necklace(t):
    return NecklacePattern(t)


def triangle_path(t):
    """t triangles {a_i,b_i,c_i} chained by b_i a_{i+1} edges; ids a_i<b_i<c_i contiguous."""
    if t < 0:
        raise ValueError("triangle-path length must be non-negative")
    edges = []
    for i in range(t):
        a, b, c = 3 * i + 1, 3 * i + 2, 3 * i + 3
        edges += [(a, b), (a, c), (b, c)]
        if i + 1 < t:
            edges.append((b, 3 * (i + 1) + 1))
    return Graph.from_edges(range(1, 3 * t + 1), edges)


def triangle_path_labels(t):
    labels = {}
    for i in range(1, t + 1):
        labels[f"a{i}"] = 3 * (i - 1) + 1
        labels[f"b{i}"] = 3 * (i - 1) + 2
        labels[f"c{i}"] = 3 * (i - 1) + 3
    return labels


def truncated_triangle_path(t):
    """Triangle-path of length t with a_1 and b_t removed, relabeled to 1..3t-2."""
    if t < 2:
        raise ValueError("truncated triangle-path requires length at least 2")
    labels = triangle_path_labels(t)
    g = triangle_path(t).delete_vertices({labels["a1"], labels[f"b{t}"]})
    mapping = {v: i for i, v in enumerate(g.vertices(), start=1)}
    return Graph.from_edges(
        range(1, g.n + 1), [(mapping[u], mapping[v]) for u, v in g.edges()]
    )


def truncated_labels(t):
    labels = triangle_path_labels(t)
    removed = {labels["a1"], labels[f"b{t}"]}
    kept = sorted(v for v in labels.values() if v not in removed)
    mapping = {v: i for i, v in enumerate(kept, start=1)}
    return {name: mapping[v] for name, v in labels.items() if v not in removed}


def truncated_center_witness(t):
    """The canonical minimal blocking set {c_i} of the truncated triangle-path."""
    labels = truncated_labels(t)
    return frozenset(labels[f"c{i}"] for i in range(1, t + 1))


class _BitGraph:
    def __init__(self, g: Graph):
        self.ids = g.vertices()
        self.index = {v: i for i, v in enumerate(self.ids)}
        self.n = len(self.ids)
        self.adj = [0] * self.n
        for u, v in g.edges():
            self.adj[self.index[u]] |= 1 << self.index[v]
            self.adj[self.index[v]] |= 1 << self.index[u]
        self.full = (1 << self.n) - 1
        self._connected_masks = None

    def ids_of(self, mask):
        out = []
        m = mask
        while m:
            low = m & -m
            out.append(self.ids[low.bit_length() - 1])
            m ^= low
        return frozenset(out)

    def mask_of(self, vertices):
        m = 0
        for v in vertices:
            m |= 1 << self.index[v]
        return m

    def neighborhood(self, mask):
        out = 0
        m = mask
        while m:
            low = m & -m
            out |= self.adj[low.bit_length() - 1]
            m ^= low
        return out & ~mask

    def edges_between(self, m1, m2):
        total = 0
        m = m1
        while m:
            low = m & -m
            total += (self.adj[low.bit_length() - 1] & m2).bit_count()
            m ^= low
        return total

    def is_connected_mask(self, mask):
        if mask == 0:
            return False
        start = (mask & -mask).bit_length() - 1
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
        return comp == mask

    def connected_masks(self):
        if self._connected_masks is None:
            self._connected_masks = [
                m for m in range(1, self.full + 1) if self.is_connected_mask(m)
            ]
        return self._connected_masks


def _check_cap(g, cap, allow_large, what):
    if g.n > cap and not allow_large:
        raise CapExceededError(
            f"{what} on {g.n} vertices exceeds the cap of {cap}; pass allow_large=True to force"
        )


def _min_vertices_for_necklace(sets_remaining):
    # no two consecutive singletons, so sizes at best alternate 1,2,1,...
    return sets_remaining + sets_remaining // 2


def _necklace_search(bg, avail, t, want_model):
    """Find t+1 disjoint connected sets inside avail with >=2 edges between consecutive."""
    masks = bg.connected_masks()

    def rec(used, last, remaining, acc):
        if remaining == 0:
            return acc if want_model else True
        free = avail & ~used
        if free.bit_count() < _min_vertices_for_necklace(remaining):
            return None if want_model else False
        for s in masks:
            if s & ~free:
                continue
            if bg.edges_between(last, s) < 2:
                continue
            got = rec(used | s, s, remaining - 1, acc + [s] if want_model else acc)
            if got:
                return got
        return None if want_model else False

    if avail.bit_count() < _min_vertices_for_necklace(t + 1):
        return None if want_model else False
    for s0 in masks:
        if s0 & ~avail:
            continue
        got = rec(s0, s0, t, [s0] if want_model else None)
        if got:
            return got
    return None if want_model else False


def has_necklace_model(g, t, cap=DEFAULT_MINOR_CAP, allow_large=False):
    _check_cap(g, cap, allow_large, "necklace model search")
    if t == 0:
        return g.n >= 1
    bg = _BitGraph(g)
    return _necklace_search(bg, bg.full, t, want_model=False)


def find_necklace_model(g, t, cap=DEFAULT_MINOR_CAP, allow_large=False):
    _check_cap(g, cap, allow_large, "necklace model search")
    bg = _BitGraph(g)
    if t == 0:
        if g.n == 0:
            return None
        sets = [frozenset({g.vertices()[0]})]
        return MinorModel("necklace", 0, tuple(sets))
    got = _necklace_search(bg, bg.full, t, want_model=True)
    if not got:
        return None
    return MinorModel("necklace", t, tuple(bg.ids_of(m) for m in got))


def necklace_minor_length(g, cap=DEFAULT_MINOR_CAP, allow_large=False):
    """Largest t with a necklace-of-length-t model; 0 exactly for forests."""
    _check_cap(g, cap, allow_large, "necklace minor length")
    bg = _BitGraph(g)
    t = 0
    while (
        bg.full.bit_count() >= _min_vertices_for_necklace(t + 2)
        and _necklace_search(bg, bg.full, t + 1, want_model=False)
    ):
        t += 1
    return t


def _tp_roles(t):
    # placement order a1,b1,c1,a2,... with the edge constraints each role must satisfy
    roles = []
    for i in range(t):
        roles.append(("a", i))
        roles.append(("b", i))
        roles.append(("c", i))
    return roles


def _tp_search(bg, t, want_model):
    masks = bg.connected_masks()
    roles = _tp_roles(t)

    def rec(pos, used, placed):
        if pos == len(roles):
            return placed if want_model else True
        remaining = len(roles) - pos
        free = bg.full & ~used
        if free.bit_count() < remaining:
            return None if want_model else False
        kind, i = roles[pos]
        for s in masks:
            if s & used:
                continue
            if kind == "a":
                if i > 0 and bg.edges_between(placed[3 * (i - 1) + 1], s) < 1:
                    continue
            elif kind == "b":
                if bg.edges_between(placed[3 * i], s) < 1:
                    continue
            else:
                if (
                    bg.edges_between(placed[3 * i], s) < 1
                    or bg.edges_between(placed[3 * i + 1], s) < 1
                ):
                    continue
            got = rec(pos + 1, used | s, placed + [s])
            if got:
                return got
        return None if want_model else False

    return rec(0, 0, [])


def has_triangle_path_model(g, t, cap=DEFAULT_MINOR_CAP, allow_large=False):
    _check_cap(g, cap, allow_large, "triangle-path model search")
    if t == 0:
        return True
    if 3 * t > g.n:
        return False
    bg = _BitGraph(g)
    return bool(_tp_search(bg, t, want_model=False))


def triangle_path_minor_length(g, cap=DEFAULT_MINOR_CAP, allow_large=False):
    _check_cap(g, cap, allow_large, "triangle-path minor length")
    bg = _BitGraph(g)
    t = 0
    while 3 * (t + 1) <= g.n and _tp_search(bg, t + 1, want_model=False):
        t += 1
    return t


def find_triangle_path_model(g, t, cap=DEFAULT_MINOR_CAP, allow_large=False):
    _check_cap(g, cap, allow_large, "triangle-path model search")
    if t == 0:
        return MinorModel("triangle_path", 0, ())
    if 3 * t > g.n:
        return None
    bg = _BitGraph(g)
    got = _tp_search(bg, t, want_model=True)
    if not got:
        return None
    return MinorModel("triangle_path", t, tuple(bg.ids_of(m) for m in got))


def validate_necklace_model(g, model):
    """Disjointness, connectivity, and the >=2 multiplicity on consecutive pairs."""
    if model.pattern != "necklace":
        raise ValueError("not a necklace model")
    sets = model.branch_sets
    if len(sets) != model.length + 1:
        raise ValueError("wrong number of branch sets")
    _validate_branch_sets(g, sets)
    bg = _BitGraph(g)
    ms = [bg.mask_of(s) for s in sets]
    for i in range(model.length):
        if bg.edges_between(ms[i], ms[i + 1]) < 2:
            raise ValueError(f"fewer than two edges between branch sets {i} and {i + 1}")


def validate_triangle_path_model(g, model):
    if model.pattern != "triangle_path":
        raise ValueError("not a triangle-path model")
    sets = model.branch_sets
    if len(sets) != 3 * model.length:
        raise ValueError("wrong number of branch sets")
    _validate_branch_sets(g, sets)
    bg = _BitGraph(g)
    ms = [bg.mask_of(s) for s in sets]
    for i in range(model.length):
        a, b, c = ms[3 * i], ms[3 * i + 1], ms[3 * i + 2]
        for m1, m2, names in ((a, b, "a,b"), (a, c, "a,c"), (b, c, "b,c")):
            if bg.edges_between(m1, m2) < 1:
                raise ValueError(f"triangle {i + 1} misses the {names} edge")
        if i + 1 < model.length and bg.edges_between(b, ms[3 * (i + 1)]) < 1:
            raise ValueError(f"missing connector between triangles {i + 1} and {i + 2}")


def _validate_branch_sets(g, sets):
    seen = set()
    for s in sets:
        if not s:
            raise ValueError("empty branch set")
        if not s <= g.vertex_set():
            raise ValueError("branch set leaves the graph")
        if s & seen:
            raise ValueError("branch sets overlap")
        seen |= s
        if not g.induced(s).n == len(s) or not _is_connected_set(g, s):
            raise ValueError(f"branch set {sorted(s)} is not connected")


def _is_connected_set(g, s):
    from .graph import is_connected

    return is_connected(g.induced(s))


def _minimal_supports(bg, t):
    minimals = []
    floor = _min_vertices_for_necklace(t + 1)
    for mask in sorted(range(1, bg.full + 1), key=lambda m: (m.bit_count(), m)):
        if mask.bit_count() < floor:
            continue
        if any(mini & mask == mini for mini in minimals):
            continue
        if _necklace_search(bg, mask, t, want_model=False):
            minimals.append(mask)
    return minimals


def necklace_packing(g, t, cap=DEFAULT_MINOR_CAP, allow_large=False):
    """Maximum number of pairwise vertex-disjoint necklace-of-length-t models."""
    if t < 1:
        raise ValueError("packing is defined for length >= 1")
    _check_cap(g, cap, allow_large, "necklace packing")
    bg = _BitGraph(g)
    minimals = _minimal_supports(bg, t)

    best = 0

    def rec(idx, used, count):
        nonlocal best
        if count > best:
            best = count
        for j in range(idx, len(minimals)):
            if minimals[j] & used == 0:
                rec(j + 1, used | minimals[j], count + 1)

    rec(0, 0, 0)
    return best


def necklace_hitting(g, t, cap=DEFAULT_MINOR_CAP, allow_large=False):
    """Minimum vertex set meeting every necklace-of-length-t model."""
    from itertools import combinations

    if t < 1:
        raise ValueError("hitting is defined for length >= 1")
    _check_cap(g, cap, allow_large, "necklace hitting")
    bg = _BitGraph(g)
    if not _necklace_search(bg, bg.full, t, want_model=False):
        return 0
    vs = g.vertices()
    for size in range(1, g.n + 1):
        for combo in combinations(vs, size):
            rest = bg.full & ~bg.mask_of(combo)
            if not _necklace_search(bg, rest, t, want_model=False):
                return size
    return g.n


def _split_connected(bg, mask, x1, x2):
    """Partition a connected mask into two connected halves, one per marked vertex.

    Removes the first edge on the spanning-tree path between the marks and
    floods each side within the tree.
    """
    i1, i2 = bg.index[x1], bg.index[x2]
    parent = {i1: None}
    order = [i1]
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        m = bg.adj[v] & mask
        while m:
            low = m & -m
            w = low.bit_length() - 1
            m ^= low
            if w not in parent:
                parent[w] = v
                order.append(w)
    path = [i2]
    while path[-1] != i1:
        path.append(parent[path[-1]])
    cut_child, cut_parent = path[0], path[1]
    tree_children = {}
    for w, p in parent.items():
        if p is not None:
            tree_children.setdefault(p, []).append(w)

    def flood(root, banned_edge):
        comp = {root}
        stack = [root]
        while stack:
            v = stack.pop()
            for w in tree_children.get(v, []):
                if (v, w) != banned_edge and w not in comp:
                    comp.add(w)
                    stack.append(w)
            p = parent.get(v)
            if p is not None and (p, v) != banned_edge and p not in comp:
                comp.add(p)
                stack.append(p)
        m = 0
        for v in comp:
            m |= 1 << v
        return m

    side2 = flood(cut_child, (cut_parent, cut_child))
    side1 = mask & ~side2
    return side1, side2


def necklace_model_to_triangle_path(g, model):
    """Convert a necklace model of length t into a triangle-path model of length
    floor((t+1)/2) by splitting every odd-position branch set (or its partner)
    at the endpoints of its two connecting edges."""
    validate_necklace_model(g, model)
    t = model.length
    if t < 1:
        raise ValueError("conversion needs a necklace of length at least 1")
    bg = _BitGraph(g)
    sets = [bg.mask_of(s) for s in model.branch_sets]
    out_len = (t + 1) // 2

    def edge_list(m1, m2):
        out = []
        m = m1
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            mm = bg.adj[i] & m2
            while mm:
                lo2 = mm & -mm
                out.append((bg.ids[i], bg.ids[lo2.bit_length() - 1]))
                mm ^= lo2
        out.sort()
        return out

    connectors = {}
    for i in range(1, out_len):
        connectors[i] = edge_list(sets[2 * i - 1], sets[2 * i])[0]

    triangles = []
    for i in range(1, out_len + 1):
        left, right = sets[2 * i - 2], sets[2 * i - 1]
        e1, e2 = edge_list(left, right)[:2]
        u1, v1 = e1
        u2, v2 = e2
        incoming = connectors.get(i - 1)  # edge from previous b-side, endpoint in `left`
        outgoing = connectors.get(i)  # edge to next a-side, endpoint in `right`
        if u1 != u2:
            part1, part2 = _split_connected(bg, left, u1, u2)
            if incoming is not None:
                inc = 1 << bg.index[incoming[1]]
                a_side = part1 if part1 & inc else part2
            else:
                a_side = min(part1, part2)
            c_side = part2 if a_side == part1 else part1
            b_side = right
        else:
            part1, part2 = _split_connected(bg, right, v1, v2)
            a_side = left
            if outgoing is not None:
                out_bit = 1 << bg.index[outgoing[0]]
                b_side = part1 if part1 & out_bit else part2
            else:
                b_side = min(part1, part2)
            c_side = part2 if b_side == part1 else part1
        triangles += [a_side, b_side, c_side]

    result = MinorModel(
        "triangle_path", out_len, tuple(bg.ids_of(m) for m in triangles)
    )
    validate_triangle_path_model(g, result)
    return result
