"""Graph-level decisions about the C*-algebra of a finite graph and its
gauge-fixed (AF) core, each returned with a checkable witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graph import GraphError, MultiGraph, nontrivial_sccs, reachable
from .skew import ComponentCofinality, ComponentSkew, _z_window, component_as_skew, z_component_cofinal
from .structure import (
    ConditionK,
    Cofinality,
    NotStronglyConnectedError,
    cofinal_sc_subgraph,
    condition_K,
    infinite_emitters,
    is_cofinal,
    is_hereditary,
    is_saturated,
    period,
    saturated_closure,
    sinks,
    sources,
)
from .voltage import ones


def _require_nonempty(g: MultiGraph) -> None:
    if not g.vertices:
        raise GraphError("empty graph")


def _require_sc(g: MultiGraph) -> None:
    from .graph import is_strongly_connected

    if not is_strongly_connected(g):
        raise NotStronglyConnectedError("not strongly connected")
    g.require_row_finite()


# -- simplicity of C*(E) -----------------------------------------------------


@dataclass(frozen=True)
class SimplicityVerdict:
    simple: bool
    cofinal: Cofinality
    condition_K: ConditionK
    infinite_emitters_reached: bool
    unreached: tuple[str, str] | None = None  # (vertex, infinite emitter it misses)

    def __bool__(self):
        return self.simple

    def to_dict(self) -> dict:
        return {
            "simple": self.simple,
            "cofinal": self.cofinal.to_dict(),
            "condition_K": self.condition_K.to_dict(),
            "infinite_emitters_reached": {
                "holds": self.infinite_emitters_reached,
                "vertex": self.unreached[0] if self.unreached else None,
                "emitter": self.unreached[1] if self.unreached else None,
            },
        }


def csimple(g: MultiGraph) -> SimplicityVerdict:
    """Cofinality, condition (K), and every vertex reaching every vertex that
    emits infinitely many edges; simple iff all three hold."""
    _require_nonempty(g)
    cof = is_cofinal(g)
    k = condition_K(g)
    unreached = None
    for x in sorted(infinite_emitters(g), key=g.index):
        into = reachable(g, [x], reverse=True)
        if len(into) < len(g.vertices):
            unreached = (next(u for u in g.vertices if u not in into), x)
            break
    inf_ok = unreached is None
    return SimplicityVerdict(bool(cof) and bool(k) and inf_ok, cof, k, inf_ok, unreached)


class Kind(str, Enum):
    AF = "AF"
    MORITA_SC = "MORITA_SC"
    NONE = "NONE"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    subgraph: MultiGraph | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        if self.subgraph is not None:
            out["subgraph"] = {
                "vertices": list(self.subgraph.vertices),
                "edges": list(self.subgraph.edge_ids),
            }
        return out


def classify(g: MultiGraph) -> Classification:
    """For simple ``C*(E)``: AF when there are no loops, otherwise Morita
    equivalent to the algebra of the strongly connected cofinal subgraph."""
    if not csimple(g):
        raise GraphError("classification needs a simple graph algebra")
    if not nontrivial_sccs(g):
        return Classification(Kind.AF)
    f = cofinal_sc_subgraph(g)
    if f is None:
        raise AssertionError("simple graph with loops has no cofinal strongly connected subgraph")
    return Classification(Kind.MORITA_SC, f)


# -- the AF core ---------------------------------------------------------------


class Reason(str, Enum):
    SINGLE_VERTEX = "SINGLE_VERTEX"
    COFINAL_SC_PERIOD_1 = "COFINAL_SC_PERIOD_1"
    NOT_SIMPLE = "NOT_SIMPLE"


@dataclass(frozen=True)
class CoreVerdict:
    simple: bool
    reason: Reason
    witness: dict
    period: int | None
    classification: Classification
    sources: tuple[str, ...]
    route: str

    def __bool__(self):
        return self.simple

    def to_dict(self) -> dict:
        return {
            "simple": self.simple,
            "reason": self.reason.value,
            "witness": self.witness,
            "period": self.period,
            "classification": self.classification.to_dict(),
            "sources": list(self.sources),
            "route": self.route,
        }


def _unreaching_set(g: MultiGraph, cls) -> list[str]:
    """Vertices that cannot reach ``cls``: saturated and hereditary."""
    into = reachable(g, cls, reverse=True)
    return [u for u in g.vertices if u not in into]


def af_core_simple(g: MultiGraph) -> CoreVerdict:
    """Decide simplicity of the gauge-fixed core.

    Order of tests: the one-vertex edgeless graph (simple); infinite emitters
    (not simple); sinks (not simple); failure of cofinality, witnessed by a
    proper nonempty saturated hereditary set; finally the period of the
    unique cofinal strongly connected subgraph, simple iff it is 1.
    """
    _require_nonempty(g)
    srcs = tuple(sorted(sources(g), key=g.index))
    none = Classification(Kind.NONE)
    if len(g.vertices) == 1 and not g.edges:
        return CoreVerdict(True, Reason.SINGLE_VERTEX, {"vertex": g.vertices[0]}, None, Classification(Kind.AF), srcs, "single-vertex")

    def no(witness, route, per=None, cls=none):
        return CoreVerdict(False, Reason.NOT_SIMPLE, witness, per, cls, srcs, route)

    infs = sorted(infinite_emitters(g), key=g.index)
    if infs:
        return no({"infinite_emitter": infs[0]}, "infinite-emitter")
    sk = sorted(sinks(g), key=g.index)
    if len(sk) >= 2:
        h = saturated_closure(g, [sk[0]]).saturated
        assert sk[1] not in h
        return no({"sinks": sk, "saturated_hereditary": sorted(h, key=g.index)}, "two-sinks")
    if sk:
        return no({"sinks": sk, "edges": len(g.edges)}, "single-sink")
    cof = is_cofinal(g)
    if not cof:
        h = _unreaching_set(g, cof.component)
        assert h and is_hereditary(g, h) and is_saturated(g, h)
        return no({"vertex": cof.vertex, "component": list(cof.component), "saturated_hereditary": h}, "not-cofinal")
    f = cofinal_sc_subgraph(g)
    if f is None:
        raise AssertionError("cofinal graph without sinks has no cofinal strongly connected subgraph")
    d = period(g, f.vertices[0]).period
    cls = Classification(Kind.MORITA_SC, f)
    if d == 1:
        return CoreVerdict(True, Reason.COFINAL_SC_PERIOD_1, {"subgraph": list(f.vertices), "period": 1}, 1, cls, srcs, "cofinal-sc")
    return no({"subgraph": list(f.vertices), "period": d}, "cofinal-sc", d, cls)


@dataclass(frozen=True, eq=False)
class CoreDecomposition:
    """The core splits into ``period`` isomorphic summands, each the algebra of
    one component of ``E x_1 Z``."""

    period: int
    component: ComponentSkew = field(repr=False)
    cofinal: ComponentCofinality

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "summands": self.period,
            "component": self.component.to_dict(),
            "component_cofinal": self.cofinal.to_dict(),
        }


def af_core_decomposition(g: MultiGraph) -> CoreDecomposition:
    _require_sc(g)
    d = period(g, g.vertices[0]).period
    comp = component_as_skew(g, ones(g))
    if comp.scale != d:
        raise AssertionError(f"local voltage group index {comp.scale} differs from the period {d}")
    return CoreDecomposition(d, comp, z_component_cofinal(g))


# -- Bratteli diagram ----------------------------------------------------------


@dataclass(frozen=True)
class BratteliDiagram:
    """Levels ``0..L``; level ``n`` holds the residue-0 vertices at height
    ``n d`` and ``multiplicities[n][i][j]`` counts paths from vertex ``i`` on
    level ``n`` to vertex ``j`` on level ``n + 1``."""

    period: int
    vertices: tuple[str, ...]
    levels: tuple[tuple[str, ...], ...]
    multiplicities: tuple[tuple[tuple[int, ...], ...], ...]

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "levels": [list(lv) for lv in self.levels],
            "multiplicities": [[list(r) for r in m] for m in self.multiplicities],
        }


def bratteli(g: MultiGraph, levels: int, v: str | None = None) -> BratteliDiagram:
    _require_sc(g)
    if levels < 1:
        raise GraphError("need at least one level")
    v = v if v is not None else g.vertices[0]
    rep = period(g, v)
    d = rep.period
    base = tuple(w for w in g.vertices if rep.residues[w] == 0)
    win = _z_window(g, ones(g), 0, levels * d)
    idx = {vid: i for i, vid in enumerate(win.graph.vertices)}
    # path counts between consecutive residue-0 levels, by dynamic programming
    mats = []
    block = np.linalg.matrix_power(g.adjacency_matrix(), d)[np.ix_([g.index(w) for w in base], [g.index(w) for w in base])]
    for n in range(levels):
        rows = []
        for w in base:
            counts = np.zeros(len(idx), dtype=np.int64)
            counts[idx[win.vertex(w, n * d)]] = 1
            for h in range(n * d, (n + 1) * d):
                nxt = np.zeros_like(counts)
                for e in win.graph.edges:
                    if win.level[e.src] == h:
                        nxt[idx[e.dst]] += counts[idx[e.src]]
                counts = nxt
            rows.append(tuple(int(counts[idx[win.vertex(u, (n + 1) * d)]]) for u in base))
        if not np.array_equal(np.array(rows), block):
            raise AssertionError(f"level {n} multiplicities differ from the incidence block")
        mats.append(tuple(rows))
    lv = tuple(tuple(win.vertex(w, n * d) for w in base) for n in range(levels + 1))
    return BratteliDiagram(d, base, lv, tuple(mats))


# -- crossed product report ----------------------------------------------------


def crossed_product_report(g: MultiGraph) -> dict:
    """Graph-level certificates behind presenting ``C*(E)`` up to stable
    isomorphism as a crossed product of a simple AF algebra by ``Z``."""
    dec = af_core_decomposition(g)
    win = dec.component.skew
    return {
        "period": dec.period,
        "component": dec.component.to_dict(),
        "component_window_acyclic": win.is_acyclic(),
        "component_cofinal": dec.cofinal.to_dict(),
        "statement": (
            "C*(E) is stably isomorphic to A x Z, where A is the AF algebra of one"
            " component of E x_1 Z; that component has no loops and is cofinal,"
            " so A is simple"
        ),
    }
