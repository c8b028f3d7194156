"""The kernelization pipeline for Independent Set with a bounded-bridge-depth modulator.

An instance is (G, X, k, c) with bd(G minus X) <= c. One level of the
pipeline: delete free components and cut over-conflicted components to a
fixpoint, then per component shrink a lowering tree with five local
meta-rules (conflict structures that barely interact with the modulator),
move the surviving lowering trees into the modulator, and descend to c-1.
Every rule application strictly shrinks |V|+|E| and appends a trace event;
replaying the trace against the original instance reproduces the output.

Checked mode re-verifies the counting bounds each level relies on and the
conflict-shift inequality for every meta-rule application; failures raise
InternalInconsistencyError, they are never silently absorbed.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations

from .errors import InternalInconsistencyError
from .graph import (
    Graph,
    _parse_records,
    connected_components,
    identify_vertices,
    is_tree,
    find_bridges,
    path_graph_of,
    tree_diameter,
    tree_longest_path,
)
from .depth import is_bd_at_most, lowering_tree
from .independence import alpha_value, conf

TRACE_SCHEMA = "bridgekit-trace/1"


@dataclass(frozen=True)
class Instance:
    graph: Graph
    modulator: frozenset
    k: int
    c: int

    def __post_init__(self):
        if not self.modulator <= self.graph.vertex_set():
            raise ValueError("modulator leaves the graph")
        if self.c < 0:
            raise ValueError("c must be non-negative")

    def validate(self):
        if not is_bd_at_most(self.remainder_graph(), self.c):
            raise ValueError(
                f"remainder has bridge-depth above {self.c}; not a valid modulator"
            )

    @property
    def remainder(self):
        return self.graph.vertex_set() - self.modulator

    def remainder_graph(self):
        return self.graph.induced(self.remainder)

    def size(self):
        return self.graph.n + self.graph.m

    def replace(self, graph=None, modulator=None, k=None, c=None):
        return Instance(
            self.graph if graph is None else graph,
            self.modulator if modulator is None else modulator,
            self.k if k is None else k,
            self.c if c is None else c,
        )


class RootType(enum.Enum):
    # whether a pendant component owns a maximum independent set avoiding its root
    AVOIDABLE = "avoidable"
    FORCED = "forced"


@dataclass(frozen=True)
class PendingComponent:
    root: int
    vertices: frozenset
    root_type: RootType


@dataclass(frozen=True)
class PendingDecomposition:
    tree: Graph
    components: dict  # root id -> PendingComponent

    def type_of(self, v):
        return self.components[v].root_type

    def pending(self, v):
        return self.components[v].vertices


@dataclass(frozen=True)
class ConflictStructure:
    kind: int
    roots: tuple
    vertices: frozenset


@dataclass
class ReductionTrace:
    events: list = field(default_factory=list)

    def append(self, event):
        self.events.append(event)

    def to_json_lines(self):
        lines = [json.dumps({"schema": TRACE_SCHEMA}, sort_keys=True)]
        for ev in self.events:
            lines.append(json.dumps(ev, sort_keys=True))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# chunks, conflicts, freeness
# ---------------------------------------------------------------------------


def enumerate_chunks(inst):
    """Nonempty independent subsets of the modulator of size <= 2^c,
    ascending size then lexicographic."""
    xs = sorted(inst.modulator)
    g = inst.graph
    out = []
    for size in range(1, min(2**inst.c, len(xs)) + 1):
        for combo in combinations(xs, size):
            if all(not g.has_edge(u, v) for u, v in combinations(combo, 2)):
                out.append(frozenset(combo))
    return out


def conf_on(inst, vertices, chunk):
    return conf(inst.graph, frozenset(vertices), chunk)


def chunk_degree(inst, chunk):
    """Number of remainder components the chunk conflicts with."""
    return sum(
        1
        for comp in connected_components(inst.remainder_graph())
        if conf_on(inst, comp, chunk) != 0
    )


def is_free(inst, zs, chunks=None):
    zs = frozenset(zs)
    if not zs <= inst.remainder:
        raise ValueError("set must lie in the remainder")
    if chunks is None:
        chunks = enumerate_chunks(inst)
    return all(conf_on(inst, zs, chunk) == 0 for chunk in chunks)


def is_almost_free(inst, zs, x, chunks=None, conf_r=None):
    """Every chunk conflicting on zs conflicts at least x times on the whole remainder."""
    zs = frozenset(zs)
    if not zs <= inst.remainder:
        raise ValueError("set must lie in the remainder")
    if chunks is None:
        chunks = enumerate_chunks(inst)
    r = inst.remainder
    for chunk in chunks:
        if conf_on(inst, zs, chunk) != 0:
            if conf_r is not None:
                total = conf_r(chunk)
            else:
                total = conf_on(inst, r, chunk)
            if total < x:
                return False
    return True


class _ChunkContext:
    """Per-instance-state cache of the chunk list and whole-remainder conflicts."""

    def __init__(self, inst):
        self.inst = inst
        self.chunks = enumerate_chunks(inst)
        self._conf_r = {}

    def conf_r(self, chunk):
        got = self._conf_r.get(chunk)
        if got is None:
            got = conf_on(self.inst, self.inst.remainder, chunk)
            self._conf_r[chunk] = got
        return got

    def almost_free(self, zs, x):
        return is_almost_free(self.inst, zs, x, chunks=self.chunks, conf_r=self.conf_r)


# ---------------------------------------------------------------------------
# component rules
# ---------------------------------------------------------------------------


def _sizes(inst):
    return [inst.graph.n, inst.graph.m]


def rule_free(inst, ctx=None):
    """Delete the first free remainder component, paying its independence number out of k."""
    ctx = ctx or _ChunkContext(inst)
    for comp in connected_components(inst.remainder_graph()):
        if all(conf_on(inst, comp, chunk) == 0 for chunk in ctx.chunks):
            gain = alpha_value(inst.graph.induced(comp))
            new = inst.replace(graph=inst.graph.delete_vertices(comp), k=inst.k - gain)
            event = {
                "rule": "free",
                "component": min(comp),
                "vertices": sorted(comp),
                "dk": -gain,
                "before": _sizes(inst),
                "after": _sizes(new),
            }
            return new, event
    return None


def rule_chunk_degree(inst, ctx=None):
    """Cut all modulator edges into the first component whose every conflicting chunk
    conflicts with more than |X| components. Requires at least one conflicting chunk
    (a conflict-free component belongs to the free rule, which runs first)."""
    ctx = ctx or _ChunkContext(inst)
    threshold = len(inst.modulator) + 1
    degrees = {}
    for comp in connected_components(inst.remainder_graph()):
        conflicting = [ch for ch in ctx.chunks if conf_on(inst, comp, ch) != 0]
        if not conflicting:
            continue
        ok = True
        for ch in conflicting:
            d = degrees.get(ch)
            if d is None:
                d = chunk_degree(inst, ch)
                degrees[ch] = d
            if d < threshold:
                ok = False
                break
        if ok:
            cut = sorted(
                (min(u, v), max(u, v))
                for u in inst.modulator
                for v in inst.graph.neighbors(u)
                if v in comp
            )
            new = inst.replace(graph=inst.graph.delete_edges(cut))
            event = {
                "rule": "chunk_degree",
                "component": min(comp),
                "edges": [list(e) for e in cut],
                "dk": 0,
                "before": _sizes(inst),
                "after": _sizes(new),
            }
            return new, event
    return None


# ---------------------------------------------------------------------------
# pending decompositions, conflict structures
# ---------------------------------------------------------------------------


def pending_decomposition(inst, component, tree):
    """Pending components of the tree inside its remainder component, with root types.

    Types are always relative to the tree actually passed in; the same vertex
    may flip type between a lowering tree and a path inside it.
    """
    component = frozenset(component)
    rg = inst.graph.induced(component)
    if not tree.vertex_set() <= component:
        raise ValueError("tree must live inside the component")
    _validate_tree_of_bridges(rg, tree)
    stripped = rg.delete_edges(tree.edges()) if tree.m else rg
    out = {}
    tree_vs = tree.vertex_set()
    for comp in connected_components(stripped):
        roots = comp & tree_vs
        if len(roots) != 1:
            raise InternalInconsistencyError("pending component without a unique root")
        (root,) = roots
        sub = rg.induced(comp)
        with_root = alpha_value(sub)
        without = alpha_value(sub.delete_vertices({root}))
        if with_root == without:
            rt = RootType.AVOIDABLE
        elif with_root == without + 1:
            rt = RootType.FORCED
        else:
            raise InternalInconsistencyError("deleting one vertex moved alpha by more than 1")
        out[root] = PendingComponent(root, comp, rt)
    if set(out) != set(tree_vs):
        raise InternalInconsistencyError("roots do not cover the tree")
    return PendingDecomposition(tree, out)


def _validate_tree_of_bridges(rg, tree):
    if not is_tree(tree):
        raise ValueError("not a tree")
    bridges = find_bridges(rg)
    for e in tree.edges():
        if e not in bridges:
            raise ValueError(f"tree edge {e} is not a bridge of its component")


def conflict_structures(decomp, kind):
    """All structures of one kind, smallest-id first."""
    tree = decomp.tree
    out = []
    if kind == 1:
        for u, v in tree.edges():
            if RootType.AVOIDABLE in (decomp.type_of(u), decomp.type_of(v)):
                out.append(
                    ConflictStructure(1, (u, v), decomp.pending(u) | decomp.pending(v))
                )
    elif kind == 2:
        for v1, v2 in tree.edges():
            if tree.degree(v1) != 2 or tree.degree(v2) != 2:
                continue
            if decomp.type_of(v1) != RootType.FORCED or decomp.type_of(v2) != RootType.FORCED:
                continue
            (u2,) = tree.neighbors(v1) - {v2}
            (u1,) = tree.neighbors(v2) - {v1}
            out.append(
                ConflictStructure(
                    2, (v1, v2, u1, u2), decomp.pending(v1) | decomp.pending(v2)
                )
            )
    elif kind == 3:
        for u in tree.vertices():
            if tree.degree(u) == 1 and decomp.type_of(u) == RootType.FORCED:
                out.append(ConflictStructure(3, (u,), decomp.pending(u)))
    elif kind == 4:
        for v1 in tree.vertices():
            if tree.degree(v1) != 1 or decomp.type_of(v1) != RootType.FORCED:
                continue
            (v2,) = tree.neighbors(v1)
            if tree.degree(v2) != 2 or decomp.type_of(v2) != RootType.FORCED:
                continue
            (u,) = tree.neighbors(v2) - {v1}
            out.append(
                ConflictStructure(4, (v1, v2, u), decomp.pending(v1) | decomp.pending(v2))
            )
    else:
        raise ValueError(f"unknown conflict-structure kind {kind}")
    return out


def find_conflict_structure(inst, decomp, kind):
    """Smallest-id structure of the kind, with no almost-free threshold applied."""
    got = conflict_structures(decomp, kind)
    return got[0] if got else None


def absorb_a_leaves(decomp):
    """Drop every avoidable leaf under a forced parent; one pass reaches the fixpoint
    because a forced parent stays forced after absorbing such leaves."""
    tree = decomp.tree
    if tree.n <= 1:
        return tree
    drop = set()
    for v in tree.vertices():
        if tree.degree(v) != 1:
            continue
        (parent,) = tree.neighbors(v)
        if (
            decomp.type_of(v) == RootType.AVOIDABLE
            and decomp.type_of(parent) == RootType.FORCED
        ):
            drop.add(v)
    return tree.delete_vertices(drop)


def leaf_counts(decomp):
    """Leaf census of a tree with types: used by the size diagnostics.

    parent_avoidable:   leaves whose parent is avoidable
    avoidable_under_forced: avoidable leaves under a forced parent (0 after absorption)
    forced_siblings:    forced leaves sharing their parent with another forced leaf
    forced_degree2:     forced leaves under a degree-2 parent
    forced_lone:        forced leaves that are the unique forced leaf of a high-degree parent
    """
    tree = decomp.tree
    counts = {
        "parent_avoidable": 0,
        "avoidable_under_forced": 0,
        "forced_siblings": 0,
        "forced_degree2": 0,
        "forced_lone": 0,
    }
    if tree.n <= 1:
        return counts
    forced_leaves_of = {}
    for v in tree.vertices():
        if tree.degree(v) == 1 and decomp.type_of(v) == RootType.FORCED:
            (p,) = tree.neighbors(v)
            forced_leaves_of.setdefault(p, []).append(v)
    for v in tree.vertices():
        if tree.degree(v) != 1:
            continue
        (p,) = tree.neighbors(v)
        if decomp.type_of(p) == RootType.AVOIDABLE:
            counts["parent_avoidable"] += 1
        elif decomp.type_of(v) == RootType.AVOIDABLE:
            counts["avoidable_under_forced"] += 1
        elif len(forced_leaves_of.get(p, ())) >= 2:
            counts["forced_siblings"] += 1
        elif tree.degree(p) == 2:
            counts["forced_degree2"] += 1
        elif tree.degree(p) > 2:
            counts["forced_lone"] += 1
    return counts


# ---------------------------------------------------------------------------
# meta-rules
# ---------------------------------------------------------------------------


def _component_of_tree(inst, tree):
    for comp in connected_components(inst.remainder_graph()):
        if tree.vertex_set() <= comp:
            return comp
    raise ValueError("tree does not lie inside one remainder component")


def meta_rule_1(inst, tree, ctx=None, decomp=None, component=None):
    """Cut the tree edge of an (|X|+2)-almost-free kind-1 structure."""
    ctx = ctx or _ChunkContext(inst)
    component = component or _component_of_tree(inst, tree)
    decomp = decomp or pending_decomposition(inst, component, tree)
    threshold = len(inst.modulator) + 2
    for cs in conflict_structures(decomp, 1):
        if ctx.almost_free(cs.vertices, threshold):
            v1, v2 = cs.roots
            new = inst.replace(graph=inst.graph.delete_edges([(v1, v2)]))
            event = {
                "rule": "meta1",
                "component": min(component),
                "edges": [[min(v1, v2), max(v1, v2)]],
                "dk": 0,
                "before": _sizes(inst),
                "after": _sizes(new),
            }
            return new, event
    return None


def meta_rule_2(inst, tree, ctx=None, decomp=None, component=None):
    """Identify across an (|X|+1)-almost-free kind-2 structure: the path (u2,v1,v2,u1)
    collapses by merging u1 with v1 and u2 with v2; k drops by one."""
    ctx = ctx or _ChunkContext(inst)
    component = component or _component_of_tree(inst, tree)
    decomp = decomp or pending_decomposition(inst, component, tree)
    threshold = len(inst.modulator) + 1
    for cs in conflict_structures(decomp, 2):
        if ctx.almost_free(cs.vertices, threshold):
            v1, v2, u1, u2 = cs.roots
            g1, w1 = identify_vertices(inst.graph, u1, v1)
            g2, w2 = identify_vertices(g1, u2, v2)
            new = inst.replace(graph=g2, k=inst.k - 1)
            event = {
                "rule": "meta2",
                "component": min(component),
                "identified": [[u1, v1, w1], [u2, v2, w2]],
                "dk": -1,
                "before": _sizes(inst),
                "after": _sizes(new),
            }
            return new, event
    return None


def pivot_degree_threshold(inst, ctx):
    """Tree degree above which the pivot rule must make progress.

    The enlarged modulator X+{v} has at most 2|chunks|+1 chunks, so once the
    component rules reach a fixpoint the remainder has at most
    (2|chunks|+1)(|X|+1) components; a pivot of larger tree degree leaves
    more components than that, forcing a deletion. (The smaller bound
    2|chunks|*|X| admits concrete stall instances.)
    """
    return (2 * len(ctx.chunks) + 1) * (len(inst.modulator) + 1)


def meta_rule_3(inst, tree, ctx=None, component=None):
    """At a tree vertex of over-threshold degree: run the component rules to a
    fixpoint with the vertex temporarily in the modulator, then hand the modulator
    back. Guaranteed to delete at least one vertex."""
    ctx = ctx or _ChunkContext(inst)
    component = component or _component_of_tree(inst, tree)
    threshold = pivot_degree_threshold(inst, ctx)
    for v in tree.vertices():
        if tree.degree(v) <= threshold:
            continue
        inner = inst.replace(modulator=inst.modulator | {v})
        inner_events = []
        while True:
            inner_ctx = _ChunkContext(inner)
            got = rule_free(inner, inner_ctx)
            if got is None:
                got = rule_chunk_degree(inner, inner_ctx)
            if got is None:
                break
            inner, ev = got
            inner_events.append(ev)
        new = inner.replace(modulator=inst.modulator)
        if new.graph.n >= inst.graph.n:
            raise InternalInconsistencyError(
                "high-degree rule failed to delete a vertex"
            )
        event = {
            "rule": "meta3",
            "component": min(component),
            "pivot": v,
            "dk": new.k - inst.k,
            "inner": inner_events,
            "before": _sizes(inst),
            "after": _sizes(new),
        }
        return new, event
    return None


def meta_rule_4(inst, tree, ctx=None, decomp=None, component=None):
    """Delete a forced leaf and its parent when the leaf's pending component is
    (|X|+2)-almost-free (kind 3); k drops by one."""
    ctx = ctx or _ChunkContext(inst)
    component = component or _component_of_tree(inst, tree)
    decomp = decomp or pending_decomposition(inst, component, tree)
    threshold = len(inst.modulator) + 2
    for cs in conflict_structures(decomp, 3):
        if ctx.almost_free(cs.vertices, threshold):
            (u,) = cs.roots
            (parent,) = tree.neighbors(u)
            new = inst.replace(
                graph=inst.graph.delete_vertices({u, parent}), k=inst.k - 1
            )
            event = {
                "rule": "meta4",
                "component": min(component),
                "vertices": sorted((u, parent)),
                "dk": -1,
                "before": _sizes(inst),
                "after": _sizes(new),
            }
            return new, event
    return None


def meta_rule_5(inst, tree, ctx=None, decomp=None, component=None):
    """On an (|X|+1)-almost-free kind-4 structure (path v1,v2,u with forced leaf v1):
    identify v1 with u and delete v2; k drops by one."""
    ctx = ctx or _ChunkContext(inst)
    component = component or _component_of_tree(inst, tree)
    decomp = decomp or pending_decomposition(inst, component, tree)
    threshold = len(inst.modulator) + 1
    for cs in conflict_structures(decomp, 4):
        if ctx.almost_free(cs.vertices, threshold):
            v1, v2, u = cs.roots
            g1, w = identify_vertices(inst.graph, v1, u)
            new = inst.replace(graph=g1.delete_vertices({v2}), k=inst.k - 1)
            event = {
                "rule": "meta5",
                "component": min(component),
                "identified": [[v1, u, w]],
                "vertices": [v2],
                "dk": -1,
                "before": _sizes(inst),
                "after": _sizes(new),
            }
            return new, event
    return None


# ---------------------------------------------------------------------------
# checked-mode assertions
# ---------------------------------------------------------------------------


def _assert_shift(inst, new, chunks_before, checked):
    """Conflict shift: any rewiring done by the meta-rules costs a chunk at most one
    whole-remainder conflict."""
    if not checked:
        return
    for chunk in chunks_before:
        if not chunk <= new.graph.vertex_set():
            continue
        before = conf(inst.graph, inst.remainder, chunk)
        after = conf(new.graph, new.remainder, chunk)
        if after < before - 1:
            raise InternalInconsistencyError(
                f"conflict count of chunk {sorted(chunk)} dropped by more than one"
            )


def _assert_component_bound(inst, ctx):
    bound = len(ctx.chunks) * len(inst.modulator)
    got = len(connected_components(inst.remainder_graph()))
    if got > bound:
        raise InternalInconsistencyError(
            f"{got} remainder components exceed the chunk-degree bound {bound}"
        )


def _assert_degree_bound(inst, ctx, tree):
    bound = pivot_degree_threshold(inst, ctx)
    worst = max((tree.degree(v) for v in tree.vertices()), default=0)
    if worst > bound:
        raise InternalInconsistencyError(
            f"tree degree {worst} exceeds the pivot bound {bound}"
        )


def _assert_leaf_bound(inst, ctx, decomp, which, slack):
    counts = leaf_counts(decomp)
    tree = decomp.tree
    delta = max((tree.degree(v) for v in tree.vertices()), default=0)
    bound = delta * len(ctx.chunks) * (len(inst.modulator) + slack)
    if counts[which] > bound:
        raise InternalInconsistencyError(
            f"leaf count {which}={counts[which]} exceeds bound {bound}"
        )


def _assert_tree_size_bound(decomp):
    tree = decomp.tree
    if tree.n < 3:
        return
    counts = leaf_counts(decomp)
    if counts["avoidable_under_forced"] != 0:
        raise InternalInconsistencyError("absorption left an avoidable leaf under a forced parent")
    core = counts["forced_siblings"] + counts["forced_degree2"] + counts["parent_avoidable"]
    diam = tree_diameter(tree)
    if tree.n > 2 * core * diam * diam:
        raise InternalInconsistencyError(
            f"tree of {tree.n} vertices exceeds the leaf-diameter bound {2 * core * diam * diam}"
        )


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------


def _trivial_yes_instance():
    return Instance(Graph.from_edges([1], []), frozenset({1}), 0, 0)


def kernelize(inst, checked=False):
    """Run the full pipeline; returns (equivalent instance with c=0, trace).

    The final modulator is the whole vertex set of the output graph: at c=0
    the remainder must be empty, so nothing is lost in reporting it that way.
    """
    inst.validate()
    trace = ReductionTrace()
    trace.append(
        {
            "rule": "start",
            "n": inst.graph.n,
            "m": inst.graph.m,
            "k": inst.k,
            "c": inst.c,
            "modulator": sorted(inst.modulator),
            "size_bound_exponent": 2 ** sum(range(5, inst.c + 5)),
        }
    )

    while True:
        if inst.k < 0:
            # alpha >= k holds vacuously; any yes-instance is equivalent
            new = _trivial_yes_instance()
            trace.append(
                {
                    "rule": "negative_k_shortcut",
                    "dk": new.k - inst.k,
                    "before": _sizes(inst),
                    "after": _sizes(new),
                }
            )
            inst = new
            continue
        if inst.c == 0:
            break

        ctx = _ChunkContext(inst)
        got = rule_free(inst, ctx)
        if got is not None:
            inst = got[0]
            trace.append(got[1])
            continue
        got = rule_chunk_degree(inst, ctx)
        if got is not None:
            inst = got[0]
            trace.append(got[1])
            continue
        if checked:
            _assert_component_bound(inst, ctx)

        restarted = False
        surviving_trees = []
        for comp in connected_components(inst.remainder_graph()):
            rg = inst.graph.induced(comp)
            tree = lowering_tree(rg, cap=rg.n).tree
            path = path_graph_of(rg, tree_longest_path(tree))

            decomp_path = pending_decomposition(inst, comp, path)
            got = meta_rule_1(inst, path, ctx, decomp_path, comp)
            if got is None:
                got = meta_rule_2(inst, path, ctx, decomp_path, comp)
            if got is None:
                got = meta_rule_3(inst, tree, ctx, comp)
            if got is not None:
                if got[1]["rule"] != "meta3":
                    # rule 2 inside meta3 may drop many conflicts at once; the
                    # one-step shift bound applies to the local rewirings only
                    _assert_shift(inst, got[0], ctx.chunks, checked)
                inst = got[0]
                trace.append(got[1])
                restarted = True
                break
            if checked:
                _assert_degree_bound(inst, ctx, tree)

            decomp_tree = pending_decomposition(inst, comp, tree)
            pruned = absorb_a_leaves(decomp_tree)
            decomp_pruned = pending_decomposition(inst, comp, pruned)
            got = meta_rule_1(inst, pruned, ctx, decomp_pruned, comp)
            if got is None:
                if checked:
                    _assert_leaf_bound(inst, ctx, decomp_pruned, "parent_avoidable", 2)
                got = meta_rule_4(inst, pruned, ctx, decomp_pruned, comp)
            if got is None:
                if checked:
                    _assert_leaf_bound(inst, ctx, decomp_pruned, "forced_siblings", 2)
                got = meta_rule_5(inst, pruned, ctx, decomp_pruned, comp)
            if got is not None:
                _assert_shift(inst, got[0], ctx.chunks, checked)
                inst = got[0]
                trace.append(got[1])
                restarted = True
                break
            if checked:
                _assert_leaf_bound(inst, ctx, decomp_pruned, "forced_degree2", 1)
                _assert_tree_size_bound(decomp_pruned)
            surviving_trees.append(tree)

        if restarted:
            continue

        promoted = frozenset().union(
            *(t.vertex_set() for t in surviving_trees)
        ) if surviving_trees else frozenset()
        new_modulator = inst.modulator | promoted
        if not is_bd_at_most(inst.graph.induced(inst.graph.vertex_set() - new_modulator), inst.c - 1):
            raise InternalInconsistencyError(
                "promoting the lowering trees did not lower the remainder bridge-depth"
            )
        inst = inst.replace(modulator=new_modulator, c=inst.c - 1)
        trace.append(
            {
                "rule": "descend",
                "modulator": sorted(new_modulator),
                "c": inst.c,
                "dk": 0,
            }
        )

    if inst.remainder:
        raise InternalInconsistencyError("remainder must be empty once c reaches 0")
    final = inst.replace(modulator=inst.graph.vertex_set())
    return final, trace


def verify_equivalence(inst_a, inst_b, cap=64):
    """True iff the two instances answer alike: alpha(G) >= k on both or on neither."""
    a = alpha_value(inst_a.graph, cap=cap) >= inst_a.k
    b = alpha_value(inst_b.graph, cap=cap) >= inst_b.k
    return a == b


# ---------------------------------------------------------------------------
# trace replay
# ---------------------------------------------------------------------------


def replay_trace(inst, trace):
    """Re-apply the recorded actions; returns the reconstructed final instance."""
    events = trace.events if isinstance(trace, ReductionTrace) else trace
    for ev in events:
        inst = _replay_event(inst, ev)
    if inst.c == 0 and not inst.remainder:
        inst = inst.replace(modulator=inst.graph.vertex_set())
    return inst


def _replay_event(inst, ev):
    rule = ev["rule"]
    if rule == "start":
        return inst
    if rule == "negative_k_shortcut":
        return _trivial_yes_instance()
    if rule == "free":
        return inst.replace(
            graph=inst.graph.delete_vertices(ev["vertices"]), k=inst.k + ev["dk"]
        )
    if rule in ("chunk_degree", "meta1"):
        return inst.replace(graph=inst.graph.delete_edges([tuple(e) for e in ev["edges"]]))
    if rule == "meta2":
        g = inst.graph
        for u, v, w in ev["identified"]:
            g, minted = identify_vertices(g, u, v)
            if minted != w:
                raise InternalInconsistencyError("replay minted a different id")
        return inst.replace(graph=g, k=inst.k + ev["dk"])
    if rule == "meta3":
        inner = inst
        for sub in ev["inner"]:
            inner = _replay_event(inner, sub)
        return inner
    if rule == "meta4":
        return inst.replace(
            graph=inst.graph.delete_vertices(ev["vertices"]), k=inst.k + ev["dk"]
        )
    if rule == "meta5":
        g = inst.graph
        for u, v, w in ev["identified"]:
            g, minted = identify_vertices(g, u, v)
            if minted != w:
                raise InternalInconsistencyError("replay minted a different id")
        return inst.replace(graph=g.delete_vertices(ev["vertices"]), k=inst.k + ev["dk"])
    if rule == "descend":
        return inst.replace(modulator=frozenset(ev["modulator"]), c=ev["c"])
    raise ValueError(f"unknown trace rule {rule!r}")


# ---------------------------------------------------------------------------
# instance files: the graph format plus 'x <id>', 'k <int>', 'c <int>' records
# ---------------------------------------------------------------------------


def load_instance(text, k=None, c=None, validate=True):
    """Parse an instance file; k and c arguments override the file's records."""
    n, edges, extra = _parse_records(text, allowed=("p", "v", "e", "x", "k", "c"))
    graph = Graph.from_edges(range(1, n + 1), edges)
    file_k = extra["k"] if k is None else k
    file_c = extra["c"] if c is None else c
    if file_k is None:
        raise ValueError("no target size: the file has no 'k' record and none was given")
    if file_c is None:
        raise ValueError("no depth bound: the file has no 'c' record and none was given")
    inst = Instance(graph, frozenset(extra["x"]), file_k, file_c)
    if validate:
        inst.validate()
    return inst


def dump_instance(inst):
    """Canonical instance text; relabels to 1..n when ids are not already that."""
    g = inst.graph
    modulator = inst.modulator
    if g.vertices() != list(range(1, g.n + 1)):
        mapping = {v: i for i, v in enumerate(g.vertices(), start=1)}
        edges = [(mapping[u], mapping[v]) for u, v in g.edges()]
        g = Graph.from_edges(range(1, g.n + 1), edges)
        modulator = frozenset(mapping[v] for v in modulator)
    lines = [f"p {g.n} {g.m}"]
    for v in g.vertices():
        if g.degree(v) == 0:
            lines.append(f"v {v}")
    for u, v in g.edges():
        lines.append(f"e {u} {v}")
    for v in sorted(modulator):
        lines.append(f"x {v}")
    lines.append(f"k {inst.k}")
    lines.append(f"c {inst.c}")
    return "\n".join(lines) + "\n"
