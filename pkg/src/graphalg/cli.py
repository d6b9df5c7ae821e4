"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
input error.  JSON output uses sorted keys so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .algebra import af_core_decomposition, af_core_simple, bratteli, csimple
from .covering import NotACoveringError, component_coverings, decompose, parse_covering_map, verify_covering
from .graph import GraphError, MultiGraph, is_connected, is_strongly_connected, parse_graph, serialize_graph, to_dot
from .groups import GroupError, Integers, PermutationGroup, Subgroup, parse_cycles, parse_group
from .skew import component_count, relative_skew, z_window
from .structure import aperiodic_power, eventual_loop_threshold, period, saturated_closure
from .voltage import coboundary, local_voltage_group, parse_labels, serialize_labels, t_voltage

OK, NEGATIVE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _read(path: str) -> str:
    return Path(path).read_text()


def _graph(path: str) -> MultiGraph:
    return parse_graph(_read(path))


def _vertex(g: MultiGraph, v: str | None) -> str:
    if v is None:
        if not g.vertices:
            raise GraphError("empty graph")
        return g.vertices[0]
    g.index(v)
    return v


def parse_subgroup(spec: str | None, group) -> Subgroup:
    """``trivial`` | ``all`` | an integer generator | permutation generators."""
    if spec is None or spec == "trivial":
        return Subgroup.trivial(group)
    if spec == "all":
        return Subgroup.whole(group)
    if isinstance(group, PermutationGroup):
        gens = [parse_cycles(x, group.degree) for x in re.findall(r"(?:\([^)]*\))+", spec)]
        if not gens and spec.strip() not in ("()", ""):
            raise GroupError(f"bad subgroup spec {spec!r}")
        return Subgroup.generated(group, [group.check(x) for x in gens])
    try:
        n = int(spec)
    except ValueError:
        raise GroupError(f"bad subgroup spec {spec!r}") from None
    if isinstance(group, Integers):
        return Subgroup(group, modulus=abs(n))
    return Subgroup.generated(group, [group.check(n)])


def _window(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        return int(a), int(b)
    except ValueError:
        raise UsageError(f"bad window {text!r}, expected a..b") from None


# -- subcommands -------------------------------------------------------------


def analyze_graph(g: MultiGraph, name: str, levels: int | None = None) -> dict:
    cs = csimple(g)
    core = af_core_simple(g)
    out = {"graph": name, "csimple": cs.to_dict(), "af_core": core.to_dict(), "period": core.period}
    out["decomposition"] = None
    if g.is_row_finite and is_strongly_connected(g):
        out["period"] = period(g, g.vertices[0]).period
        out["decomposition"] = af_core_decomposition(g).to_dict()
    if levels is not None:
        out["bratteli"] = bratteli(g, levels).to_dict()
    return out


def _analyze_one(path: Path) -> tuple[dict | None, str | None]:
    try:
        g = _graph(str(path))
        return analyze_graph(g, path.name), None
    except (GraphError, GroupError, OSError) as exc:
        return None, f"{path.name}: {exc}"


def cmd_analyze(args) -> int:
    if args.batch:
        files = sorted(p for p in Path(args.batch).iterdir() if p.suffix == ".g")
        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(_analyze_one, files))
        status = OK
        for report, err in results:
            if err:
                print(f"error: {err}", file=sys.stderr)
                status = ERROR
            else:
                print(json.dumps(report, sort_keys=True))
        return status
    if not args.graph:
        raise UsageError("analyze needs a graph file or --batch")
    g = _graph(args.graph)
    if args.emit_dot:
        print(to_dot(g), end="")
        return OK
    report = analyze_graph(g, Path(args.graph).name)
    if args.text:
        cs, core = report["csimple"], report["af_core"]
        print(f"graph {report['graph']}")
        print(f"C*(E) simple: {cs['simple']}")
        print(f"AF core simple: {core['simple']} ({core['reason']}, {core['route']})")
        print(f"period: {report['period']}")
    else:
        print(_dump(report))
    return OK if report["csimple"]["simple"] else NEGATIVE


def cmd_period(args) -> int:
    g = _graph(args.graph)
    v = _vertex(g, args.base)
    rep = period(g, v)
    out = rep.to_dict()
    if g.is_row_finite and is_strongly_connected(g):
        out["loop_threshold"] = eventual_loop_threshold(g, v)
        out["primitive_power"] = aperiodic_power(g)
    if args.text:
        print(f"period {rep.period} at {v}")
        for w, r in rep.residues.items():
            print(f"residue {w} {r}")
    else:
        print(_dump(out))
    return OK


def cmd_closure(args) -> int:
    g = _graph(args.graph)
    xs = [x for x in args.set.split(",") if x]
    cl = saturated_closure(g, xs)
    out = cl.to_dict(g)
    out["proper"] = 0 < len(cl.saturated) < len(g.vertices)
    if args.text:
        print(" ".join(out["saturated"]))
    else:
        print(_dump(out))
    return OK


def _labels(g: MultiGraph, group_spec: str, path: str):
    group = parse_group(group_spec)
    return parse_labels(_read(path), g, group)


def cmd_skew(args) -> int:
    g = _graph(args.graph)
    c = _labels(g, args.group, args.labels)
    if args.window:
        lo, hi = _window(args.window)
        if args.subgroup:
            raise UsageError("--subgroup does not apply to a window")
        sk = z_window(g, c, lo, hi)
    else:
        sk = relative_skew(g, c, parse_subgroup(args.subgroup, c.group))
    report = None
    if args.components:
        from .graph import weak_components

        comps = weak_components(sk.graph)
        report = {"graph_components": len(comps), "sizes": [len(x) for x in comps]}
        if is_connected(g) and g.vertices:
            n = component_count(g, c)
            report["product_components"] = n if isinstance(n, int) else "infinite"
            report["local_group"] = local_voltage_group(c, g.vertices[0]).to_dict()
        if args.window:
            report["acyclic"] = sk.is_acyclic()
            report["graded"] = sk.is_graded()
    if args.json:
        out = {"graph": serialize_graph(sk.graph)}
        if report is not None:
            out["components"] = report
        print(_dump(out))
    else:
        print(serialize_graph(sk.graph), end="")
        if report is not None:
            print("# components " + json.dumps(report, sort_keys=True))
    return OK


def cmd_voltage(args) -> int:
    g = _graph(args.graph)
    c = _labels(g, args.group, args.labels)
    v = _vertex(g, args.base)
    lv = local_voltage_group(c, v)
    tv = t_voltage(c, lv.tree)
    out = lv.to_dict()
    out["tree"] = sorted(lv.tree.edges)
    out["t_voltage"] = {e: c.group.format(x) for e, x in tv.values.items()}
    if args.text:
        print(f"# local voltage group at {v}: {lv.subgroup.describe()}")
        print(serialize_labels(tv), end="")
    else:
        print(_dump(out))
    return OK


def cmd_cohomologous(args) -> int:
    g = _graph(args.graph)
    c1 = _labels(g, args.group, args.labels1)
    c2 = _labels(g, args.group, args.labels2)
    b = coboundary(c1, c2)
    out = {"cohomologous": b is not None, "coboundary": None}
    if b is not None:
        out["coboundary"] = {w: c1.group.format(x) for w, x in b.items()}
    if args.text:
        print("cohomologous" if b is not None else "not cohomologous")
    else:
        print(_dump(out))
    return OK if b is not None else NEGATIVE


def cmd_cover(args) -> int:
    f_graph, e_graph = _graph(args.cover), _graph(args.base_graph)
    p = parse_covering_map(_read(args.map), f_graph, e_graph)
    if args.action == "verify":
        try:
            cov = verify_covering(p)
        except NotACoveringError as exc:
            out = {"covering": False, "vertex": exc.vertex, "side": exc.side, "detail": exc.detail}
        else:
            out = {"covering": True, "fibers": {v: list(cov.fiber(v)) for v in e_graph.vertices}}
        if args.text:
            print("covering" if out["covering"] else f"not a covering at {out['vertex']} ({out['side']}-star)")
        else:
            print(_dump(out))
        return OK if out["covering"] else NEGATIVE
    cov = verify_covering(p)
    if args.per_component:
        parts = [decompose(q, args.base) for q in component_coverings(p)]
        out = {"components": [d.to_dict() for d in parts]}
    else:
        out = decompose(cov, args.base).to_dict()
    if args.text:
        items = out["components"] if args.per_component else [out]
        for d in items:
            print(f"fiber {' '.join(d['fiber'])} regular {d['regular']}")
            for e, perm in d["permutations"].items():
                print(f"perm {e} {perm}")
    else:
        print(_dump(out))
    return OK


def cmd_afcore(args) -> int:
    g = _graph(args.graph)
    core = af_core_simple(g)
    out = core.to_dict()
    if args.bratteli is not None:
        out["bratteli"] = bratteli(g, args.bratteli).to_dict()
    if args.text:
        print(f"AF core simple: {core.simple} ({core.reason.value}, {core.route})")
    else:
        print(_dump(out))
    return OK if core.simple else NEGATIVE


# -- parser ------------------------------------------------------------------


def _output_flags(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--json", action="store_true", help="JSON output (the default)")
    grp.add_argument("--text", action="store_true", help="short plain-text output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphalg", description="Analyze directed multigraphs and their graph algebras.")
    ap.add_argument("--version", action="version", version=f"graphalg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="simplicity verdicts, period and decomposition")
    p.add_argument("graph", nargs="?")
    p.add_argument("--batch", metavar="DIR", help="analyze every .g file in DIR, one JSON line each")
    p.add_argument("--emit-dot", action="store_true", help="print the graph in DOT format instead")
    _output_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("period", help="period and residue classes")
    p.add_argument("graph")
    p.add_argument("--base")
    _output_flags(p)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("closure", help="saturated hereditary closure")
    p.add_argument("graph")
    p.add_argument("--set", required=True, help="comma-separated vertices")
    _output_flags(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("skew", help="relative skew product or integer window")
    p.add_argument("graph")
    p.add_argument("--group", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--subgroup")
    p.add_argument("--window", help="levels a..b of the integer skew product")
    p.add_argument("--components", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_skew, text=False)

    p = sub.add_parser("voltage", help="T-voltage and local voltage group")
    p.add_argument("graph")
    p.add_argument("--group", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--base")
    _output_flags(p)
    p.set_defaults(func=cmd_voltage)

    p = sub.add_parser("cohomologous", help="test two labellings for cohomology")
    p.add_argument("graph")
    p.add_argument("--group", required=True)
    p.add_argument("--labels1", required=True)
    p.add_argument("--labels2", required=True)
    _output_flags(p)
    p.set_defaults(func=cmd_cohomologous)

    p = sub.add_parser("cover", help="verify or decompose a covering map")
    p.add_argument("action", choices=["verify", "decompose"])
    p.add_argument("cover", metavar="F.g")
    p.add_argument("base_graph", metavar="E.g")
    p.add_argument("--map", required=True)
    p.add_argument("--base", help="base vertex of E")
    p.add_argument("--per-component", action="store_true", help="decompose each component of F")
    _output_flags(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("afcore", help="AF core simplicity")
    p.add_argument("graph")
    p.add_argument("--bratteli", type=int, metavar="L")
    _output_flags(p)
    p.set_defaults(func=cmd_afcore)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return ERROR
    except (GraphError, GroupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
