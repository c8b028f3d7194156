"""Verification sweeps: exhaustive and randomized suites behind the selftest command
and the acceptance tests. Each sweep returns a Report; failures carry replayable
counterexample certificates (edge lists, seeds, sets)."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import independence as ind
from . import depth as depth_mod
from .blocking import (
    is_blocking_set,
    mbs_witness,
    shrink_blocking_set,
    shrink_blocking_set_bipartite,
)
from .depth import bridge_depth, fvs_number, is_bd_at_most, tree_depth, treewidth
from .enumeration import (
    KNOWN_CONNECTED_COUNTS,
    KNOWN_GRAPH_COUNTS,
    all_graphs,
    all_graphs_up_to,
    connected_graphs,
    random_bipartite,
    random_graph,
    random_modulator_instance,
)
from .graph import (
    Graph,
    bipartition,
    connected_components,
    contract_all_bridges,
    find_bridges,
    identify_vertices,
    is_connected,
)
from .independence import alpha_naive, alpha_value
from .kernel import Instance, kernelize, replay_trace, verify_equivalence
from .minors import (
    find_necklace_model,
    necklace_minor_length,
    necklace_model_to_triangle_path,
    necklace_packing,
    triangle_path_minor_length,
    validate_triangle_path_model,
)
from .minors import truncated_center_witness, truncated_triangle_path


@dataclass
class Report:
    criterion: str
    description: str
    passed: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, certificate):
        self.passed = False
        self.failures.append(certificate)

    def as_record(self):
        return {
            "criterion": self.criterion,
            "description": self.description,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "details": self.details,
        }


def _edges_of(g):
    return [list(e) for e in g.edges()]


def clear_all_caches():
    ind.clear_caches()
    depth_mod.clear_caches()


# ---------------------------------------------------------------------------
# 1. minimal blocking sets never exceed 2^bd (exhaustive)
# ---------------------------------------------------------------------------


def sweep_blocking_vs_depth(max_n=7):
    rep = Report("1", f"mbs(G) <= 2^bd(G) on all connected graphs with <= {max_n} vertices")
    for n in range(1, max_n + 1):
        for g in connected_graphs(n):
            value, witness = mbs_witness(g)
            bd = bridge_depth(g)
            rep.checked += 1
            if value > 2**bd:
                rep.fail(
                    {"edges": _edges_of(g), "mbs": value, "bd": bd, "witness": sorted(witness)}
                )
        clear_all_caches()
    return rep


# ---------------------------------------------------------------------------
# 2. tightness family
# ---------------------------------------------------------------------------


def sweep_tightness_family(cs=(1, 2, 3)):
    rep = Report("2", "truncated triangle-paths: bd(U_{2^c}) = c and mbs = 2^c with the center witness")
    for c in cs:
        t = 2**c
        g = truncated_triangle_path(t)
        witness = truncated_center_witness(t)
        bd = bridge_depth(g, cap=g.n)
        value, _ = mbs_witness(g)
        cert = is_blocking_set(g, witness)
        minimal = cert is not None and all(
            is_blocking_set(g, witness - {y}) is None for y in witness
        )
        rep.checked += 1
        if not (bd == c and value == t and minimal):
            rep.fail(
                {
                    "c": c,
                    "bd": bd,
                    "mbs": value,
                    "witness_blocking": cert is not None,
                    "witness_minimal": minimal,
                }
            )
    clear_all_caches()
    return rep


# ---------------------------------------------------------------------------
# 3. bridge-depth identities on random graphs
# ---------------------------------------------------------------------------


def sweep_depth_properties(count=1000, max_n=10, seed=0):
    rep = Report("3", f"bridge-depth identities on {count} random graphs with <= {max_n} vertices")
    rng = random.Random(seed)
    for trial in range(count):
        n = rng.randint(1, max_n)
        p = rng.choice([0.15, 0.25, 0.4, 0.6])
        g = random_graph(rng, n, p)
        bd = bridge_depth(g)
        ok = True
        notes = {}

        gbar, _ = contract_all_bridges(g)
        if bridge_depth(gbar) != bd:
            ok, notes["contraction_stable"] = False, bridge_depth(gbar)
        tw = treewidth(g)
        td = tree_depth(g)
        fvs = fvs_number(g)
        if not (tw <= bd <= td):
            ok, notes["sandwich"] = False, (tw, bd, td)
        if bd > fvs + 1:
            ok, notes["fvs"] = False, (bd, fvs)
        xs = frozenset(v for v in g.vertices() if rng.random() < 0.3)
        if bd > len(xs) + bridge_depth(g.delete_vertices(xs)):
            ok, notes["modulator"] = False, sorted(xs)
        if g.m:
            edge = rng.choice(g.edges())
            smaller = g.delete_edges([edge])
            if bridge_depth(smaller) > bd:
                ok, notes["minor_delete"] = False, list(edge)
            contracted, _ = identify_vertices(g, *edge)
            if bridge_depth(contracted) > bd:
                ok, notes["minor_contract"] = False, list(edge)

        rep.checked += 1
        if not ok:
            rep.fail({"trial": trial, "edges": _edges_of(g), "bd": bd, "violations": notes})
        if trial % 100 == 99:
            clear_all_caches()
    clear_all_caches()
    return rep


# ---------------------------------------------------------------------------
# 4. bipartite shrinking
# ---------------------------------------------------------------------------


def _random_blocking_set(rng, g, tries=30):
    if g.n == 0 or alpha_value(g) == 0:
        return None
    for _ in range(tries):
        ys = frozenset(v for v in g.vertices() if rng.random() < rng.choice([0.3, 0.5, 0.7]))
        if ys and is_blocking_set(g, ys) is not None:
            return ys
    return g.vertex_set()  # always blocking for nonempty graphs


def sweep_bipartite_shrink(count=1000, max_n=12, seed=1):
    rep = Report("4", f"bipartite blocking sets shrink to <= 2 straddling vertices ({count} random graphs)")
    rng = random.Random(seed)
    for trial in range(count):
        n_a = rng.randint(1, max_n // 2)
        n_b = rng.randint(1, max_n - n_a)
        g, a, b = random_bipartite(rng, n_a, n_b, rng.choice([0.2, 0.35, 0.5]))
        ys = _random_blocking_set(rng, g)
        if ys is None:
            continue
        out = shrink_blocking_set_bipartite(g, a, b, ys)
        ok = (
            out <= ys
            and len(out) <= 2
            and is_blocking_set(g, out) is not None
            and (len(out) != 2 or (len(out & a) == 1 and len(out & b) == 1))
        )
        rep.checked += 1
        if not ok:
            rep.fail(
                {"trial": trial, "edges": _edges_of(g), "y": sorted(ys), "out": sorted(out)}
            )
        if trial % 100 == 99:
            clear_all_caches()
    clear_all_caches()
    return rep


# ---------------------------------------------------------------------------
# 5. general shrinking through the auxiliary construction
# ---------------------------------------------------------------------------


def sweep_general_shrink(count=500, max_n=10, seed=2):
    rep = Report(
        "5",
        f"blocking sets shrink to <= 2^bd with verified auxiliary transfers ({count} random graphs, bd <= 3)",
    )
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        n = rng.randint(2, max_n)
        g = random_graph(rng, n, rng.choice([0.2, 0.3, 0.45]))
        bd = bridge_depth(g)
        if bd > 3:
            continue
        ys = _random_blocking_set(rng, g)
        if ys is None:
            continue
        produced += 1
        out = shrink_blocking_set(g, ys)  # alpha transfers assert-checked inside
        ok = out <= ys and is_blocking_set(g, out) is not None and len(out) <= 2**bd
        rep.checked += 1
        if not ok:
            rep.fail({"edges": _edges_of(g), "bd": bd, "y": sorted(ys), "out": sorted(out)})
        if produced % 100 == 99:
            clear_all_caches()
    clear_all_caches()
    return rep


# ---------------------------------------------------------------------------
# 6. kernelization equivalence
# ---------------------------------------------------------------------------


def sweep_kernelization(count=500, max_v=18, seed=3):
    rep = Report(
        "6",
        f"kernel outputs stay equivalent for every k, with checked-mode bounds ({count} random instances)",
    )
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        c = rng.choice([1, 2])
        g, xs = random_modulator_instance(rng, c, max_v=max_v)
        if not is_bd_at_most(g.induced(g.vertex_set() - xs), c):
            continue
        produced += 1
        for k in range(0, g.n + 1):
            inst = Instance(g, xs, k, c)
            out, trace = kernelize(inst, checked=True)
            rep.checked += 1
            bad = {}
            if not verify_equivalence(inst, out):
                bad["equivalence"] = False
            if out.size() > inst.size():
                bad["grew"] = [inst.size(), out.size()]
            if replay_trace(inst, trace) != out:
                bad["replay"] = False
            if bad:
                rep.fail(
                    {
                        "edges": _edges_of(g),
                        "x": sorted(xs),
                        "k": k,
                        "c": c,
                        "violations": bad,
                    }
                )
        clear_all_caches()
    return rep


# ---------------------------------------------------------------------------
# 7. packing number of longest necklaces (exhaustive, parallelizable)
# ---------------------------------------------------------------------------


def _packing_worker(payload):
    n, edge_list = payload
    g = Graph.from_edges(range(1, n + 1), edge_list)
    t = necklace_minor_length(g)
    if t < 1:
        return (payload, t, None)
    return (payload, t, necklace_packing(g, t))


def sweep_necklace_packing(max_n=8, jobs=1):
    rep = Report(
        "7",
        f"longest-necklace models pairwise intersect in connected bridgeless graphs (<= {max_n} vertices)",
    )
    payloads = []
    for n in range(1, max_n + 1):
        for g in connected_graphs(n):
            if not find_bridges(g):
                payloads.append((g.n, tuple(g.edges())))
    for payload, t, packing in _run_jobs(_packing_worker, payloads, jobs):
        if t < 1:
            continue
        rep.checked += 1
        if packing != 1:
            n, edge_list = payload
            rep.fail({"edges": [list(e) for e in edge_list], "nm": t, "packing": packing})
    rep.details["graphs_scanned"] = len(payloads)
    return rep


# ---------------------------------------------------------------------------
# 8. triangle-path length vs necklace length, with the constructive converter
# ---------------------------------------------------------------------------


def _tp_bound_worker(payload):
    n, edge_list = payload
    g = Graph.from_edges(range(1, n + 1), edge_list)
    t = necklace_minor_length(g)
    tp = triangle_path_minor_length(g)
    converter_ok = True
    if t >= 1:
        model = find_necklace_model(g, t)
        try:
            converted = necklace_model_to_triangle_path(g, model)
            validate_triangle_path_model(g, converted)
            if converted.length != (t + 1) // 2:
                converter_ok = False
        except Exception:
            converter_ok = False
    return (payload, t, tp, converter_ok)


def sweep_triangle_path_bound(max_n=8, jobs=1):
    rep = Report(
        "8",
        f"tpm >= floor((nm+1)/2) with validated constructive conversion (all graphs <= {max_n} vertices)",
    )
    payloads = [
        (g.n, tuple(g.edges())) for g in all_graphs_up_to(max_n) if g.n >= 1
    ]
    bd_by_nm = {}
    for payload, t, tp, converter_ok in _run_jobs(_tp_bound_worker, payloads, jobs):
        rep.checked += 1
        if tp < (t + 1) // 2 or not converter_ok:
            rep.fail(
                {
                    "edges": [list(e) for e in payload[1]],
                    "nm": t,
                    "tpm": tp,
                    "converter_ok": converter_ok,
                }
            )
    # diagnostic only: the largest bridge-depth seen for each necklace length
    for n in range(1, min(max_n, 7) + 1):
        for g in all_graphs(n):
            if g.n == 0:
                continue
            t = necklace_minor_length(g)
            bd = bridge_depth(g)
            bd_by_nm[t] = max(bd_by_nm.get(t, 0), bd)
        clear_all_caches()
    rep.details["max_bd_by_nm"] = {str(k): v for k, v in sorted(bd_by_nm.items())}
    return rep


# ---------------------------------------------------------------------------
# 9. oracle cross-validation
# ---------------------------------------------------------------------------


def sweep_oracle_cross_validation(max_n=8):
    rep = Report(
        "9", f"solver alpha vs powerset, lowpoint bridges vs deletion test (all graphs <= {max_n})"
    )
    for n in range(0, max_n + 1):
        for g in all_graphs(n):
            rep.checked += 1
            if alpha_value(g) != alpha_naive(g):
                rep.fail({"edges": _edges_of(g), "kind": "alpha"})
            naive_bridges = frozenset(
                e
                for e in g.edges()
                if len(connected_components(g.delete_edges([e])))
                > len(connected_components(g))
            )
            if find_bridges(g) != naive_bridges:
                rep.fail({"edges": _edges_of(g), "kind": "bridges"})
        clear_all_caches()
    expected = {
        "graphs": KNOWN_GRAPH_COUNTS,
        "connected": KNOWN_CONNECTED_COUNTS,
    }
    for n in range(0, max_n + 1):
        if len(all_graphs(n)) != KNOWN_GRAPH_COUNTS[n]:
            rep.fail({"kind": "graph_count", "n": n, "got": len(all_graphs(n))})
        if n >= 1 and len(connected_graphs(n)) != KNOWN_CONNECTED_COUNTS[n]:
            rep.fail({"kind": "connected_count", "n": n, "got": len(connected_graphs(n))})
    rep.details["count_table"] = expected
    return rep


# ---------------------------------------------------------------------------
# scaling and the driver
# ---------------------------------------------------------------------------


def _run_jobs(worker, payloads, jobs):
    if jobs <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, payloads, chunksize=64))


LEVELS = {
    "0": dict(max_exhaustive=5, minor_max=5, randomized=30, kernel=10, kernel_v=12),
    "small": dict(max_exhaustive=6, minor_max=6, randomized=150, kernel=60, kernel_v=14),
    "full": dict(max_exhaustive=7, minor_max=8, randomized=1000, kernel=500, kernel_v=18),
}


def run_selftest(level="small", seed=0, jobs=1):
    """All sweeps at the requested size level, in criterion order."""
    cfg = LEVELS[level]
    reports = [
        sweep_blocking_vs_depth(max_n=cfg["max_exhaustive"]),
        sweep_tightness_family(cs=(1, 2) if level == "0" else (1, 2, 3)),
        sweep_depth_properties(count=cfg["randomized"], seed=seed),
        sweep_bipartite_shrink(count=cfg["randomized"], seed=seed + 1),
        sweep_general_shrink(count=max(cfg["randomized"] // 2, 10), seed=seed + 2),
        sweep_kernelization(count=cfg["kernel"], max_v=cfg["kernel_v"], seed=seed + 3),
        sweep_necklace_packing(max_n=cfg["minor_max"], jobs=jobs),
        sweep_triangle_path_bound(max_n=cfg["minor_max"], jobs=jobs),
        sweep_oracle_cross_validation(max_n=min(cfg["minor_max"], 8)),
    ]
    return reports
