import itertools

import pytest

from graphalg.graph import parse_graph
from graphalg.structure import (
    NotStronglyConnectedError,
    aperiodic_power,
    cofinal_sc_subgraph,
    condition_K,
    deep_paths,
    distance_layer,
    eventual_loop_threshold,
    hereditary_closure,
    infinite_emitters,
    is_cofinal,
    is_hereditary,
    is_row_finite,
    is_saturated,
    path_threshold,
    period,
    saturated_closure,
    sinks,
    sources,
)

import oracles as O
from conftest import make


def test_sinks_sources_row_finite():
    uw = make(["u", "w"], [("e", "u", "w")])
    assert sinks(uw) == {"w"} and sources(uw) == {"u"}
    loop = make(["v"], [("e", "v", "v")])
    assert sinks(loop) == set() and sources(loop) == set()
    g = parse_graph("vertex u\nvertex w\nedge e u w inf")
    assert not is_row_finite(g) and infinite_emitters(g) == {"u"}


def test_period_examples(c3, p23):
    rep = period(c3, "v1")
    assert rep.period == 3 and rep.residues == {"v1": 0, "v2": 1, "v3": 2}
    assert period(p23, "v").period == 1
    assert period(make(["u", "w"], [("e", "u", "w")]), "u").period == 0


def test_period_witnesses_realise_the_gcd(p23):
    rep = period(p23, "v")
    lengths = [len(w) for w in rep.witnesses]
    assert all(w.is_path and w.is_closed and w.start == "v" for w in rep.witnesses)
    assert sorted(lengths) == [2, 3]


def test_period_loop_off_base_vertex():
    # simple cycles through v have length 2 only, but a loop at a makes the period 1
    g = make(["v", "a"], [("x", "v", "a"), ("y", "a", "v"), ("z", "a", "a")])
    assert period(g, "v").period == 1


def test_residue_soundness(p23, c3):
    for g in (c3, p23):
        v = g.vertices[0]
        rep = period(g, v)
        n = len(g.vertices)
        es = O.from_multigraph(g)[1]
        for w in g.vertices:
            j = g.index(w)
            for length in range(2 * n + 1):
                if _has_path(n, es, 0, j, length):
                    assert length % rep.period == rep.residues[w]


def _has_path(n, es, i, j, length):
    cur = {i}
    for _ in range(length):
        cur = {t for s, t, _ in es if s in cur}
    return j in cur


def test_loop_thresholds(c3, p23):
    assert eventual_loop_threshold(make(["v"], [("e", "v", "v")]), "v") == 1
    assert eventual_loop_threshold(p23, "v") == 2
    assert eventual_loop_threshold(c3, "v1") == 1
    with pytest.raises(NotStronglyConnectedError):
        eventual_loop_threshold(make(["u", "w"], [("e", "u", "w")]), "u")


def test_path_thresholds(c3, p23):
    assert path_threshold(c3, "v1", "v2") == (1, 0)
    assert path_threshold(c3, "v1", "v1") == (0, 0)
    r, n = path_threshold(p23, "v", "a")
    assert r == 0
    # lengths 1, 3, 4, 5, ... reach a from v; 2 does not
    assert n == 3


def test_thresholds_against_enumeration(p23):
    n_vertices = len(p23.vertices)
    es = O.from_multigraph(p23)[1]
    for w in p23.vertices:
        r, big_n = path_threshold(p23, "v", w)
        j = p23.index(w)
        hits = [_has_path(n_vertices, es, 0, j, k) for k in range(30)]
        assert all(hits[big_n:])
        if big_n > 0:
            assert not hits[big_n - 1]


def test_condition_k_examples(c3, fig8):
    k = condition_K(c3)
    assert not k and k.vertex == "v1" and k.loop.edge_ids == ("e1", "e2", "e3")
    assert condition_K(fig8)
    assert condition_K(make(["u", "w"], [("e", "u", "w")]))


def test_condition_k_counts_returning_loops():
    # v carries a loop and a 2-cycle through w: each vertex has two first-return loops
    g = make(["v", "w"], [("a", "v", "v"), ("b", "v", "w"), ("c", "w", "v")])
    assert condition_K(g)


def test_cofinality_examples(c3, two_scc):
    assert is_cofinal(c3)
    cof = is_cofinal(two_scc)
    assert not cof and cof.vertex == "w" and cof.component == ("u",)
    assert is_cofinal(make(["u", "w"], [("e", "u", "w")]))


def test_cofinal_sc_subgraph(c3, two_scc):
    tail = make(
        ["u", "v1", "v2", "v3"],
        [("t", "u", "v1"), ("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")],
    )
    f = cofinal_sc_subgraph(tail)
    assert f.vertices == ("v1", "v2", "v3") and set(f.edge_ids) == {"e1", "e2", "e3"}
    assert cofinal_sc_subgraph(two_scc) is None
    assert cofinal_sc_subgraph(make(["u", "w"], [("e", "u", "w")])) is None
    assert cofinal_sc_subgraph(c3).vertices == c3.vertices


def test_closure_examples(fig8):
    uw = make(["u", "w"], [("e", "u", "w")])
    cl = saturated_closure(uw, ["w"])
    assert cl.hereditary == {"w"} and cl.saturated == {"u", "w"} and cl.steps == (("u",),)
    empty = saturated_closure(uw, [])
    assert empty.hereditary == set() and empty.saturated == set()
    assert saturated_closure(fig8, ["v"]).saturated == {"v"}
    with pytest.raises(Exception, match="unknown vertex"):
        hereditary_closure(uw, ["z"])


def test_infinite_emitters_never_saturate():
    g = parse_graph("vertex u\nvertex w\nedge e u w inf")
    assert saturated_closure(g, ["w"]).saturated == {"w"}


def test_saturated_closure_is_minimal_exhaustively():
    g = make(
        ["a", "b", "c", "d", "e"],
        [("p", "a", "b"), ("q", "b", "c"), ("r", "a", "d"), ("s", "d", "c"), ("t", "e", "e"), ("u", "e", "a")],
    )
    subsets = [set(s) for k in range(6) for s in itertools.combinations(g.vertices, k)]
    closed = [s for s in subsets if is_hereditary(g, s) and is_saturated(g, s)]
    for x in subsets:
        sigma = saturated_closure(g, x).saturated
        assert is_hereditary(g, sigma) and is_saturated(g, sigma) and x <= sigma
        assert min((s for s in closed if x <= s), key=len) == sigma


def test_deep_paths_examples(c3, fig8):
    chain = make(["u", "a", "b"], [("x", "u", "a"), ("y", "a", "b")])
    [p] = deep_paths(chain, "u", 2)
    assert p.edge_ids == ("x", "y")
    assert deep_paths(c3, "v1", 3) == []
    assert deep_paths(fig8, "v", 1) == []


def test_deep_path_ranges_match_distance_layers(p23):
    for n in range(1, 5):
        ends = {p.end for p in deep_paths(p23, "v", n)}
        assert ends == distance_layer(p23, "v", n)


def test_aperiodic_power(fig8, c3, p23):
    assert aperiodic_power(fig8) == 1
    assert aperiodic_power(c3) is None
    k = aperiodic_power(p23)
    assert k is not None and k <= (len(p23.vertices) - 1) ** 2 + 1
