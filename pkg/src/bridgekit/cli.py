"""Command-line front end.

Commands: bd, kernelize, mbs, shrink, gen, nm, tpm, selftest, dump.
Exit codes: 0 ok, 1 usage or invalid input, 2 parse error, 3 size cap
exceeded, 4 internal assertion or selftest counterexample.

Identical inputs and seeds produce byte-identical outputs: nothing
time- or environment-dependent is ever printed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import CapExceededError, GraphFormatError, InternalInconsistencyError
from .graph import Graph, dump_graph, load_graph
from .depth import (
    DEFAULT_DEPTH_CAP,
    DEFAULT_PARAM_CAP,
    bridge_depth,
    fvs_number,
    lowering_tree,
    tree_depth,
    treewidth,
)
from .blocking import DEFAULT_MBS_CAP, is_blocking_set, mbs_witness, shrink_blocking_set
from .graph import connected_components
from .kernel import Instance, dump_instance, kernelize, load_instance
from .minors import (
    DEFAULT_MINOR_CAP,
    necklace_minor_length,
    triangle_path,
    triangle_path_minor_length,
    truncated_triangle_path,
)
from .sweeps import LEVELS, run_selftest

SCHEMA = "bridgekit/1"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_ASSERTION = 4


@dataclass
class RunConfig:
    command: str
    inputs: list
    c: int | None = None
    k: int | None = None
    seed: int = 0
    cap: int | None = None
    checked: bool = False
    jobs: int = 1
    fmt: str = "text"
    out: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Output:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.lines = []

    def emit(self, text_line, record):
        if self.cfg.fmt == "json":
            record = dict(record)
            record.setdefault("schema", SCHEMA)
            self.lines.append(json.dumps(record, sort_keys=True))
        else:
            self.lines.append(text_line)

    def raw(self, text):
        # verbatim payloads (graph/instance files) are identical in both formats
        self.lines.append(text.rstrip("\n"))

    def flush(self):
        payload = "\n".join(self.lines) + "\n" if self.lines else ""
        if self.cfg.out:
            with open(self.cfg.out, "w", encoding="utf-8") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload)


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def build_parser():
    parser = _Parser(prog="bridgekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cap_default=None):
        p.add_argument("--format", choices=("text", "json"), default="text", dest="fmt")
        p.add_argument("--out", default=None)
        p.add_argument("--cap", type=int, default=cap_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--checked", action="store_true")

    p = sub.add_parser("bd", help="bridge-depth with a lowering-tree certificate")
    p.add_argument("file")
    common(p, DEFAULT_DEPTH_CAP)

    p = sub.add_parser("kernelize", help="run the kernelization pipeline on an instance file")
    p.add_argument("file")
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trace-out", default=None)
    common(p)

    p = sub.add_parser("mbs", help="largest minimal blocking set")
    p.add_argument("file")
    common(p, DEFAULT_MBS_CAP)

    p = sub.add_parser("shrink", help="shrink a blocking set (vertex ids after the file)")
    p.add_argument("file")
    p.add_argument("vertices", type=int, nargs="+")
    common(p)

    p = sub.add_parser("gen", help="write a generator family member as a graph file")
    p.add_argument("family", choices=("triangle-path", "truncated", "path", "cycle", "grid"))
    p.add_argument("t", type=int)
    common(p)

    p = sub.add_parser("nm", help="necklace-minor length")
    p.add_argument("file")
    p.add_argument("--allow-large", action="store_true")
    common(p, DEFAULT_MINOR_CAP)

    p = sub.add_parser("tpm", help="triangle-path-minor length")
    p.add_argument("file")
    p.add_argument("--allow-large", action="store_true")
    common(p, DEFAULT_MINOR_CAP)

    p = sub.add_parser("selftest", help="run the verification sweeps")
    p.add_argument("--level", choices=tuple(LEVELS), default="small")
    common(p)

    p = sub.add_parser("dump", help="re-emit a graph file in canonical form")
    p.add_argument("file")
    common(p)

    return parser


def cmd_bd(args, out):
    g = load_graph(_read(args.file))
    cap = args.cap or DEFAULT_DEPTH_CAP
    bd = bridge_depth(g, cap=cap)
    record = {"command": "bd", "bd": bd}
    out.emit(f"bd={bd}", record)
    if g.n:
        comps = connected_components(g)
        target = next(
            c for c in comps if bridge_depth(g.induced(c), cap=cap) == bd
        )
        lt = lowering_tree(g.induced(target), cap=cap)
        cert = {
            "command": "bd.certificate",
            "component": min(target),
            "tree_vertices": sorted(lt.tree.vertices()),
            "tree_edges": [list(e) for e in lt.tree.edges()],
            "bd_before": lt.certified_bd_before,
            "bd_after": lt.certified_bd_after,
        }
        out.emit(
            "lowering tree: vertices %s, bd %d -> %d"
            % (sorted(lt.tree.vertices()), lt.certified_bd_before, lt.certified_bd_after),
            cert,
        )
    if g.n <= DEFAULT_PARAM_CAP:
        td = tree_depth(g)
        tw = treewidth(g)
        fvs = fvs_number(g)
        out.emit(
            f"comparisons: tw={tw} <= bd={bd} <= td={td}; fvs={fvs}",
            {"command": "bd.comparisons", "tw": tw, "td": td, "fvs": fvs},
        )
    else:
        out.emit(
            f"comparisons: skipped ({g.n} vertices exceed the parameter oracle cap {DEFAULT_PARAM_CAP})",
            {"command": "bd.comparisons", "skipped": True, "cap": DEFAULT_PARAM_CAP},
        )
    return EXIT_OK


def cmd_kernelize(args, out):
    inst = load_instance(_read(args.file), k=args.k, c=args.c, validate=False)
    try:
        inst.validate()
    except ValueError as exc:
        # report the offending component as a witness
        rg = inst.remainder_graph()
        witness = None
        from .depth import is_bd_at_most

        for comp in connected_components(rg):
            if not is_bd_at_most(rg.induced(comp), inst.c):
                witness = sorted(comp)
                break
        print(f"invalid instance: {exc}; witness component: {witness}", file=sys.stderr)
        return EXIT_USAGE
    result, trace = kernelize(inst, checked=args.checked)
    if args.fmt == "json":
        out.emit("", {"command": "kernelize", "k": result.k, "c": result.c,
                      "n": result.graph.n, "m": result.graph.m})
        for ev in trace.events:
            out.emit("", {"command": "kernelize.trace", "event": ev})
        out.emit("", {"command": "kernelize.instance", "text": dump_instance(result)})
    else:
        out.raw(dump_instance(result))
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            fh.write(trace.to_json_lines())
    return EXIT_OK


def cmd_mbs(args, out):
    g = load_graph(_read(args.file))
    value, witness = mbs_witness(g, cap=args.cap or DEFAULT_MBS_CAP)
    out.emit(
        f"mbs={value} witness={sorted(witness)}",
        {"command": "mbs", "mbs": value, "witness": sorted(witness)},
    )
    return EXIT_OK


def cmd_shrink(args, out):
    g = load_graph(_read(args.file))
    ys = frozenset(args.vertices)
    cert = is_blocking_set(g, ys)
    if cert is None:
        print("error: the given set is not blocking", file=sys.stderr)
        return EXIT_USAGE
    shrunk = shrink_blocking_set(g, ys)
    after = is_blocking_set(g, shrunk)
    out.emit(
        f"shrunk={sorted(shrunk)} alpha {after.alpha_before} -> {after.alpha_after}",
        {
            "command": "shrink",
            "input": sorted(ys),
            "output": sorted(shrunk),
            "alpha_before": after.alpha_before,
            "alpha_after": after.alpha_after,
        },
    )
    return EXIT_OK


def _gen_graph(family, t):
    if family == "triangle-path":
        return triangle_path(t)
    if family == "truncated":
        return truncated_triangle_path(t)
    if family == "path":
        if t < 1:
            raise ValueError("path needs at least one vertex")
        return Graph.from_edges(range(1, t + 1), [(i, i + 1) for i in range(1, t)])
    if family == "cycle":
        if t < 3:
            raise ValueError("cycle needs at least three vertices")
        edges = [(i, i + 1) for i in range(1, t)] + [(1, t)]
        return Graph.from_edges(range(1, t + 1), edges)
    if family == "grid":
        if t < 1:
            raise ValueError("grid needs positive side length")
        def vid(r, col):
            return r * t + col + 1
        edges = []
        for r in range(t):
            for col in range(t):
                if col + 1 < t:
                    edges.append((vid(r, col), vid(r, col + 1)))
                if r + 1 < t:
                    edges.append((vid(r, col), vid(r + 1, col)))
        return Graph.from_edges(range(1, t * t + 1), edges)
    raise ValueError(f"unknown family {family}")


def cmd_gen(args, out):
    try:
        g = _gen_graph(args.family, args.t)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.raw(dump_graph(g))
    return EXIT_OK


def cmd_nm(args, out):
    g = load_graph(_read(args.file))
    value = necklace_minor_length(
        g, cap=args.cap or DEFAULT_MINOR_CAP, allow_large=args.allow_large
    )
    out.emit(f"nm={value}", {"command": "nm", "nm": value})
    return EXIT_OK


def cmd_tpm(args, out):
    g = load_graph(_read(args.file))
    value = triangle_path_minor_length(
        g, cap=args.cap or DEFAULT_MINOR_CAP, allow_large=args.allow_large
    )
    out.emit(f"tpm={value}", {"command": "tpm", "tpm": value})
    return EXIT_OK


def cmd_selftest(args, out):
    reports = run_selftest(level=args.level, seed=args.seed, jobs=args.jobs)
    all_ok = True
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        if not rep.passed:
            all_ok = False
        out.emit(
            f"{status} criterion {rep.criterion}: {rep.description} ({rep.checked} checks)",
            {"command": "selftest", **rep.as_record()},
        )
        for cert in rep.failures:
            out.emit(f"  counterexample: {json.dumps(cert, sort_keys=True)}", {
                "command": "selftest.counterexample",
                "criterion": rep.criterion,
                "certificate": cert,
            })
    return EXIT_OK if all_ok else EXIT_ASSERTION


def cmd_dump(args, out):
    g = load_graph(_read(args.file))
    out.raw(dump_graph(g))
    return EXIT_OK


_HANDLERS = {
    "bd": cmd_bd,
    "kernelize": cmd_kernelize,
    "mbs": cmd_mbs,
    "shrink": cmd_shrink,
    "gen": cmd_gen,
    "nm": cmd_nm,
    "tpm": cmd_tpm,
    "selftest": cmd_selftest,
    "dump": cmd_dump,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        inputs=[getattr(args, "file", None)],
        c=getattr(args, "c", None),
        k=getattr(args, "k", None),
        seed=args.seed,
        cap=args.cap,
        checked=args.checked,
        jobs=args.jobs,
        fmt=args.fmt,
        out=args.out,
    )
    out = _Output(cfg)
    try:
        code = _HANDLERS[args.command](args, out)
    except GraphFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
