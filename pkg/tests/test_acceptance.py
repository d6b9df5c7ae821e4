"""Acceptance suite: eight properties checked against brute-force oracles.

Each test records one PASS/FAIL line, printed again in the pytest summary.
"""

from __future__ import annotations

import json
import random

from graphalg import (
    GraphMorphism,
    Integers,
    Subgroup,
    VoltageLabeling,
    af_core_simple,
    aperiodic_power,
    are_cohomologous,
    coboundary,
    component_count,
    csimple,
    decompose,
    find_isomorphism,
    local_voltage_group,
    ones,
    path_threshold,
    period,
    relative_skew,
    same_component,
    t_voltage,
    tree_from_edges,
    walk_voltage,
    z_window,
)
from graphalg.cli import main
from graphalg.graph import parse_graph, serialize_graph
from graphalg.groups import PermutationGroup, parse_cycles

import oracles as O
from conftest import record
from corpus import corpus
from randgraphs import (
    finite_groups,
    graph,
    random_connected,
    random_labels,
    random_row_finite,
    random_strongly_connected,
)


# 1 -----------------------------------------------------------------------------


def test_criterion_1_csimple_matches_definitional_oracles():
    cases = corpus()
    bad = []
    simple = 0
    for n, es in cases:
        v = csimple(O.to_multigraph(n, es))
        want = (O.lasso_cofinal(n, es), O.condition_k_oracle(n, es), O.infinite_reach_oracle(n, es))
        got = (bool(v.cofinal), bool(v.condition_K), v.infinite_emitters_reached)
        if got != want or v.simple != all(want):
            bad.append((n, es, got, want))
        simple += v.simple
    ok = len(cases) >= 10_000 and not bad
    record(1, ok, f"{len(cases)} corpus graphs, {simple} simple, {len(bad)} disagreements")
    assert ok, bad[:5]


# 2 -----------------------------------------------------------------------------


def test_criterion_2_period_matches_cycle_gcd():
    rng = random.Random(20240602)
    bad = []
    for _ in range(200):
        n, es = random_strongly_connected(rng, 8)
        g = graph(n, es)
        d_cycles = O.cycle_period(n, es, 0)
        d_walks = O.walk_period(n, es, 0)
        per_vertex = {period(g, v).period for v in g.vertices}
        if per_vertex != {d_cycles} or d_walks != d_cycles:
            bad.append((n, es, per_vertex, d_cycles, d_walks))
    ok = not bad
    record(2, ok, f"200 strongly connected graphs, {len(bad)} mismatches (all vertex pairs compared)")
    assert ok, bad[:3]


# 3 -----------------------------------------------------------------------------


def _oracle_group(group):
    if isinstance(group, PermutationGroup):
        return O.s3_group()
    return O.cyclic_group(group.n)


def _translate_is_isomorphism(comp_a, comp_b, arcs_by_src, h, mul):
    """Left translation ``(v, x) -> (v, h x)`` maps component a onto b."""
    image = {(v, mul(h, x)) for v, x in comp_a}
    if image != set(comp_b):
        return False
    for v, x in comp_a:
        moved = sorted(str((t, mul(h, y))) for t, y in arcs_by_src[(v, x)])
        there = sorted(str(w) for w in arcs_by_src[(v, mul(h, x))])
        if moved != there:
            return False
    return True


def test_criterion_3_component_count_law():
    rng = random.Random(7)
    groups = finite_groups()
    bad, total_iso = [], 0
    for trial in range(100):
        group = groups[trial % len(groups)]
        n, es = random_connected(rng, 5)
        g = graph(n, es)
        labels = random_labels(rng, g, group)
        c = VoltageLabeling(g, group, labels)
        elems, mul = _oracle_group(group)
        vals = [labels[f"e{k}"] for k in range(len(es))]
        vertices, arcs = O.full_product(n, es, vals, elems, mul)
        comps = O.undirected_components(vertices, arcs)
        if len(comps) != component_count(g, c):
            bad.append(("count", n, es, vals, len(comps), component_count(g, c)))
            continue
        arcs_by_src = {x: [] for x in vertices}
        for s, t in arcs:
            arcs_by_src[s].append(t)
        first = comps[0]
        v0, x0 = min(first)
        for other in comps[1:]:
            # pick h with h x0 landing in the other component
            target = next(y for y in elems if (v0, y) in set(other))
            h = next(z for z in elems if mul(z, x0) == target)
            if not _translate_is_isomorphism(first, other, arcs_by_src, h, mul):
                bad.append(("iso", n, es, vals))
                break
            total_iso += 1
        # the library's skew product agrees up to isomorphism with the oracle build
        full = relative_skew(g, c)
        if len(full.components()) != len(comps):
            bad.append(("skew", n, es, vals))
    ok = not bad
    record(3, ok, f"100 labelled graphs over Z2..Z8 and S3, {total_iso} component isomorphisms, {len(bad)} failures")
    assert ok, bad[:3]


# 4 -----------------------------------------------------------------------------


def _random_subgroup(rng, group):
    elems = group.elements()
    return Subgroup.generated(group, rng.sample(elems, rng.randint(0, 2)))


def _rebuild_from_report(report, base_graph):
    """Skew product rebuilt from the CLI's permutation table, without the library's
    coset machinery: vertices are (vertex, fibre point), arcs follow the permutations."""
    k = len(report["fiber"])
    perms = {e: parse_cycles(p, k) for e, p in report["permutations"].items()}
    vertices = [f"{v}@{i}" for i in range(k) for v in base_graph.vertices]
    lines = [f"vertex {x}" for x in vertices]
    for i in range(k):
        for e in base_graph.edges:
            lines.append(f"edge {e.id}@{i} {e.src}@{i} {e.dst}@{perms[e.id][i]}")
    rebuilt = parse_graph("\n".join(lines) + "\n")
    proj = GraphMorphism(
        rebuilt,
        base_graph,
        {x: x.rsplit("@", 1)[0] for x in rebuilt.vertices},
        {x: x.rsplit("@", 1)[0] for x in rebuilt.edge_ids},
    )
    return rebuilt, proj


def test_criterion_4_covering_round_trip(tmp_path, capsys):
    rng = random.Random(44)
    groups = finite_groups()
    done, attempts, bad = 0, 0, []
    while done < 50:
        attempts += 1
        assert attempts < 2000
        group = rng.choice(groups)
        n, es = random_connected(rng, 4, extra=3)
        g = graph(n, es)
        c = VoltageLabeling(g, group, random_labels(rng, g, group))
        h = _random_subgroup(rng, group)
        sk = relative_skew(g, c, h)
        if len(sk.components()) != 1:
            continue
        done += 1
        # through the command line, from files
        (tmp_path / "E.g").write_text(serialize_graph(g))
        (tmp_path / "F.g").write_text(serialize_graph(sk.graph))
        mp = "".join(f"vmap {a} {b}\n" for a, b in sk.projection.vertex_map.items())
        mp += "".join(f"emap {a} {b}\n" for a, b in sk.projection.edge_map.items())
        (tmp_path / "p.map").write_text(mp)
        capsys.readouterr()
        code = main(["cover", "decompose", str(tmp_path / "F.g"), str(tmp_path / "E.g"), "--map", str(tmp_path / "p.map")])
        report = json.loads(capsys.readouterr().out)
        rebuilt, proj = _rebuild_from_report(report, g)
        iso = find_isomorphism(rebuilt, sk.graph, over=(proj, sk.projection))
        # and the library's own isomorphism, checked edge by edge
        dec = decompose(sk.projection)
        phi = dec.isomorphism
        phi_ok = (
            len(set(phi.vertex_map.values())) == len(sk.graph.vertices)
            and all(
                dec.skew.projection.edge_map[phi.edge_map[f]] == sk.projection.edge_map[f]
                for f in sk.graph.edge_ids
            )
        )
        if code != 0 or iso is None or not phi_ok:
            bad.append((n, es, group.spec, h.describe()))
    ok = not bad
    record(4, ok, f"50 connected relative skew products decomposed and rebuilt, {len(bad)} failures")
    assert ok, bad[:3]


# 5 -----------------------------------------------------------------------------


def _random_tree(rng, g, root):
    """A spanning tree from a randomly ordered search over undirected adjacency."""
    seen, edges, frontier = {root}, [], [root]
    while frontier:
        u = frontier.pop(rng.randrange(len(frontier)))
        incident = list(g.out_edges(u)) + list(g.in_edges(u))
        rng.shuffle(incident)
        for e in incident:
            w = e.dst if e.src == u else e.src
            if w not in seen:
                seen.add(w)
                edges.append(e.id)
                frontier.append(w)
    return tree_from_edges(g, root, edges)


def test_criterion_5_t_voltage_properties():
    rng = random.Random(55)
    groups = [Integers()] + finite_groups()
    bad = []
    for trial in range(100):
        group = groups[trial % len(groups)]
        n, es = random_connected(rng, 5)
        g = graph(n, es)
        if isinstance(group, Integers):
            labels = {e: rng.randint(-3, 3) for e in g.edge_ids}
        else:
            labels = random_labels(rng, g, group)
        c = VoltageLabeling(g, group, labels)
        v = rng.choice(g.vertices)
        tree = _random_tree(rng, g, v)
        cvt = t_voltage(c, tree)
        # witness b(w) = c(b_w): c_{v,T}(e) b(r(e)) = b(s(e)) c(e)
        b = {w: walk_voltage(c, tree.walk_to(w)) for w in g.vertices}
        witness_ok = all(
            group.mul(cvt[e.id], b[e.dst]) == group.mul(b[e.src], c[e.id]) for e in g.edges
        )
        same_local = local_voltage_group(c, v, tree).subgroup == local_voltage_group(cvt, v, tree).subgroup
        # another tree at the same base, then another base
        tree2 = _random_tree(rng, g, v)
        cvt2 = t_voltage(c, tree2)
        tree_change = are_cohomologous(cvt, cvt2) and (
            local_voltage_group(c, v, tree).subgroup == local_voltage_group(c, v, tree2).subgroup
        )
        w = rng.choice(g.vertices)
        tree3 = _random_tree(rng, g, w)
        cwt = t_voltage(c, tree3)
        gv = local_voltage_group(c, v, tree).subgroup
        gw = local_voltage_group(c, w, tree3).subgroup
        a = tree.walk_to(w)
        conj = group.inv(walk_voltage(c, a))
        base_change = are_cohomologous(cvt, cwt) and gv.conjugate(conj) == gw
        if not (witness_ok and same_local and tree_change and base_change and coboundary(cvt, c) is not None):
            bad.append((n, es, group.spec, labels))
    ok = not bad
    record(5, ok, f"100 labelled graphs (Z, Z2..Z8, S3): witness, local groups, tree and base changes; {len(bad)} failures")
    assert ok, bad[:3]


# 6 -----------------------------------------------------------------------------


def test_criterion_6_af_core_decision():
    bad, sc_checked, simple = [], 0, 0
    for n, es in corpus():
        g = O.to_multigraph(n, es)
        verdict = af_core_simple(g)
        if verdict.simple != O.af_core_oracle(n, es):
            bad.append(("direct", n, es))
        simple += verdict.simple
        row_finite = not any(inf for _, _, inf in es)
        if row_finite and O.is_strongly_connected(n, es):
            sc_checked += 1
            if verdict.simple != (O.cycle_period(n, es, 0) == 1):
                bad.append(("period", n, es))
    ok = not bad
    record(6, ok, f"{len(corpus())} corpus graphs ({simple} simple cores), {sc_checked} strongly connected, {len(bad)} disagreements")
    assert ok, bad[:5]


# 7 -----------------------------------------------------------------------------


def test_criterion_7_integer_skew_windows():
    rng = random.Random(77)
    bad, sc_cases, queries = [], 0, 0
    for trial in range(100):
        # half the inputs strongly connected so the component predicate gets exercised
        n, es = random_strongly_connected(rng, 6) if trial % 2 else random_row_finite(rng)
        g = graph(n, es)
        c = ones(g)
        lo = rng.randint(-5, 3)
        win = z_window(g, c, lo, lo + rng.randint(1, 6))
        arcs = [(win.level[e.src], win.level[e.dst]) for e in win.graph.edges]
        if not win.is_acyclic() or any(b != a + 1 for a, b in arcs):
            bad.append(("window", n, es))
        if not O.is_strongly_connected(n, es):
            continue
        sc_cases += 1
        d = period(g, g.vertices[0]).period
        big_n = max(path_threshold(g, a, b).threshold for a in g.vertices for b in g.vertices)
        top = 2 * d + (big_n + 2) * d
        win = z_window(g, c, -1, top)
        comps = O.undirected_components(win.graph.vertices, [(e.src, e.dst) for e in win.graph.edges])
        label = {x: i for i, comp in enumerate(comps) for x in comp}
        pts = [(v, m) for v in g.vertices for m in range(0, 2 * d + 1)]
        for a in pts:
            for b in pts:
                queries += 1
                if same_component(g, c, a, b) != (label[win.vertex(*a)] == label[win.vertex(*b)]):
                    bad.append(("component", n, es, a, b))
    ok = not bad
    record(7, ok, f"100 windows acyclic and graded; {sc_cases} strongly connected inputs, {queries} component queries; {len(bad)} failures")
    assert ok, bad[:3]


# 8 -----------------------------------------------------------------------------


def test_criterion_8_aperiodicity():
    bad, aperiodic, periodic = [], 0, 0
    for n, es in corpus():
        if not O.is_strongly_connected(n, es):
            continue
        d = O.cycle_period(n, es, 0)
        cap = (n - 1) ** 2 + 1
        k = aperiodic_power(O.to_multigraph(n, es))
        if d == 1:
            aperiodic += 1
            if k is None or k > cap or O.positive_power(n, es, cap) != k:
                bad.append((n, es, d, k))
        else:
            periodic += 1
            if k is not None or not O.never_positive(n, es):
                bad.append((n, es, d, k))
    ok = not bad
    record(8, ok, f"{aperiodic} aperiodic and {periodic} periodic strongly connected corpus graphs, {len(bad)} failures")
    assert ok, bad[:5]
